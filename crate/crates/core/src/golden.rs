//! Reference rows for the running P_4 example and their checks.

use serde::Serialize;

use crate::artin::{a_word_from_image, braid_images};
use crate::braid::{BraidWord, PureWord};
use crate::comb::{CombState, FlatToken, MIForm};
use crate::error::Result;
use crate::text::{format_free, parse_free};

/// The nine-step path in P_4.
pub const PATH: &str = "s3.1^-1 s4.1 s4.3^-1 s3.2^-1 s4.2 s2.1 s3.2 s4.1^-1 s4.2^-1";

/// Normal forms of the first eight prefixes.
pub const MI_ROWS: [&str; 8] = [
    "e | e | e ; e",
    "e | s3.1^-1 | e ; e",
    "s4.3 s4.1 s4.3^-1 | s3.1^-1 | e ; e",
    "s4.3 s4.1 s4.1 s4.3^-1 s4.1^-1 s4.3^-1 | s3.1^-1 | e ; e",
    "s4.3 s4.1 s4.1 s4.3^-1 s4.1^-1 s4.3^-1 | s3.1^-1 s3.2^-1 | e ; e",
    "s4.3 s4.1 s4.1 s4.3^-1 s4.1^-1 s4.2 s4.3^-1 | s3.1^-1 s3.2^-1 | e ; e",
    "s4.3 s4.1 s4.1 s4.3^-1 s4.1^-1 s4.2 s4.3^-1 | s3.1^-1 s3.2^-1 | s2.1 ; e",
    "s4.3 s4.1 s4.1 s4.3^-1 s4.1^-1 s4.2 s4.3^-1 | s3.1^-1 s3.2^-1 s3.1^-1 s3.2 s3.1 | s2.1 ; e",
];

/// Leading 14 generator letters (separators dropped) after steps 8 and 9.
pub const PREFIX_ROWS: [(usize, &str); 2] = [
    (
        8,
        "s4.3 s4.1 s4.1 s4.3^-1 s4.1^-1 s4.2 s4.1^-1 s4.2^-1 s4.1^-1 s4.2 s4.1 s4.3^-1 s3.1^-1 s3.2^-1",
    ),
    (
        9,
        "s4.3 s4.1 s4.1 s4.3^-1 s4.1^-1 s4.2 s4.3^-1 s4.1^-1 s4.2^-1 s4.1^-1 s4.2^-1 s4.1 s4.2 s4.1",
    ),
];

pub const ARTIN_G2_X4: &str = "x4^-1 x2^-1 x1^-1 x2 x4 x2^-1 x1 x2 x4";
pub const ARTIN_G2_A4: &str = "x4^-1 x2^-1 x1^-1 x2";
pub const ARTIN_G3_X4: &str = "x2^-1 x1 x2 x3 x2^-1 x1^-1 x2 x4^-1 x2^-1 x1^-1 x2 x4 \
                               x2^-1 x1 x2 x4 x2^-1 x1 x2 x3^-1 x2^-1 x1^-1 x2";

#[derive(Clone, Debug, Serialize)]
pub struct GoldenCheck {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub got: String,
}

impl GoldenCheck {
    fn new(name: impl Into<String>, expected: impl Into<String>, got: impl Into<String>) -> Self {
        let (expected, got) = (expected.into(), got.into());
        GoldenCheck {
            name: name.into(),
            passed: expected == got,
            expected,
            got,
        }
    }
}

/// Forms `𝔍(γ_0), …, 𝔍(γ_9)` by incremental combing along [`PATH`].
pub fn path_forms() -> Result<Vec<MIForm>> {
    let path = PureWord::parse(PATH, 4)?;
    let mut st = CombState::new(4);
    let mut out = vec![st.form()];
    for &l in path.letters() {
        st.step_pure(l)?;
        out.push(st.form());
    }
    Ok(out)
}

/// The first `k` generator letters of a form, printed.
pub fn letter_prefix(form: &MIForm, k: usize) -> String {
    let letters: Vec<String> = form
        .tokens()
        .into_iter()
        .filter_map(|t| match t {
            FlatToken::Pure(l) => Some(l.to_string()),
            _ => None,
        })
        .take(k)
        .collect();
    letters.join(" ")
}

pub fn mi_checks() -> Result<Vec<GoldenCheck>> {
    let forms = path_forms()?;
    let mut out: Vec<GoldenCheck> = MI_ROWS
        .iter()
        .enumerate()
        .map(|(t, row)| GoldenCheck::new(format!("MI gamma_{t}"), *row, forms[t].to_string()))
        .collect();
    for (t, row) in PREFIX_ROWS {
        out.push(GoldenCheck::new(
            format!("MI gamma_{t} prefix(14)"),
            row,
            letter_prefix(&forms[t], 14),
        ));
    }
    Ok(out)
}

pub fn artin_checks() -> Result<Vec<GoldenCheck>> {
    let path = PureWord::parse(PATH, 4)?;
    let x4_image = |t: usize| -> Result<String> {
        let w = PureWord::new(4, path.letters()[..t].to_vec())?.to_braid();
        Ok(format_free(braid_images(&w)[3].letters(), "x"))
    };
    let canon = |s: &str| -> Result<String> { Ok(format_free(parse_free(s, 4)?.letters(), "x")) };
    let g3 = canon(ARTIN_G3_X4)?;
    let mut out = vec![
        GoldenCheck::new("Artin gamma_0(x4)", "x4", x4_image(0)?),
        GoldenCheck::new("Artin gamma_1(x4)", "x4", x4_image(1)?),
        GoldenCheck::new("Artin gamma_2(x4)", canon(ARTIN_G2_X4)?, x4_image(2)?),
        GoldenCheck::new("Artin gamma_3(x4)", g3.clone(), x4_image(3)?),
        GoldenCheck::new("Artin gamma_4(x4) = gamma_3(x4)", g3.clone(), x4_image(4)?),
    ];
    let g2 = BraidWord::parse(
        &PATH
            .split_whitespace()
            .take(2)
            .collect::<Vec<_>>()
            .join(" "),
        4,
    )?;
    let a4 = a_word_from_image(&braid_images(&g2)[3], 4)?;
    out.push(GoldenCheck::new(
        "A_4(gamma_2)",
        canon(ARTIN_G2_A4)?,
        format_free(a4.letters(), "x"),
    ));
    for t in [5, 6] {
        let img = x4_image(t)?;
        let contains = format!(" {img} ").contains(&format!(" {g3} "));
        out.push(GoldenCheck::new(
            format!("Artin gamma_{t}(x4) contains gamma_3(x4)"),
            "true",
            contains.to_string(),
        ));
    }
    Ok(out)
}

pub fn all_checks() -> Result<Vec<GoldenCheck>> {
    let mut out = mi_checks()?;
    out.extend(artin_checks()?);
    Ok(out)
}
