//! Bundled measurement datasets used by the examples, tests, and benches:
//! log-solubilities for 166 drug-like compounds and log octanol-water
//! partition coefficients for 206 polychlorinated biphenyls.

use crate::sample::Sample;

pub const SET1_RAW: &str = include_str!("../fixtures/set1_sol.txt");
pub const SET2_RAW: &str = include_str!("../fixtures/set2_pcb_logkow.txt");

/// A token that failed to parse, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseLineError {
    pub line: usize,
    pub token: String,
}

impl std::fmt::Display for ParseLineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: cannot parse {:?} as a number", self.line, self.token)
    }
}

impl std::error::Error for ParseLineError {}

/// Parses whitespace/comma-separated decimal numbers, skipping blank lines
/// and `#` comments.
pub fn parse_lines(text: &str) -> Result<Vec<f64>, ParseLineError> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for token in line.split(|c: char| c.is_whitespace() || c == ',') {
            if token.is_empty() {
                continue;
            }
            match token.parse::<f64>() {
                Ok(v) => values.push(v),
                Err(_) => {
                    return Err(ParseLineError {
                        line: i + 1,
                        token: token.to_string(),
                    })
                }
            }
        }
    }
    Ok(values)
}

/// The 166-compound solubility set.
pub fn set1() -> Sample {
    let values = parse_lines(SET1_RAW).expect("bundled fixture parses");
    Sample::new(&values, "set1_sol").expect("bundled fixture is valid")
}

/// The 206-biphenyl partition-coefficient set.
pub fn set2() -> Sample {
    let values = parse_lines(SET2_RAW).expect("bundled fixture parses");
    Sample::new(&values, "set2_pcb_logkow").expect("bundled fixture is valid")
}
