//! Plain-text perturbation problems.
//!
//! ```text
//! 2
//! 4 1
//! 0,1 3
//! 1 1
//! 0.5 0
//! ```
//!
//! The first line is the dimension `n`, followed by `n` rows of `A`. An
//! optional further two lines give `f` and `l`; without them both default to
//! the all-ones vector. Entries are `RE` or `RE,IM`. Blank lines and lines
//! starting with `#` are ignored.

use anyhow::{anyhow, bail, Context, Result};
use krein_core::{Complex64, DenseOperator, Functional, RankOneForm, Vector};

#[derive(Debug)]
pub struct Problem {
    pub a: DenseOperator,
    pub form: RankOneForm,
}

pub fn parse_complex(token: &str) -> Result<Complex64> {
    let mut parts = token.split(',');
    let re = parts.next().unwrap_or_default().trim();
    let re: f64 = re.parse().with_context(|| format!("bad number `{re}`"))?;
    let im = match parts.next() {
        Some(s) => s
            .trim()
            .parse()
            .with_context(|| format!("bad imaginary part in `{token}`"))?,
        None => 0.0,
    };
    if parts.next().is_some() {
        bail!("too many components in `{token}`");
    }
    Ok(Complex64::new(re, im))
}

fn parse_row(line: &str, n: usize, what: &str) -> Result<Vec<Complex64>> {
    let values = line
        .split_whitespace()
        .map(parse_complex)
        .collect::<Result<Vec<_>>>()?;
    if values.len() != n {
        bail!("{what} has {} entries, expected {n}", values.len());
    }
    Ok(values)
}

pub fn parse(text: &str) -> Result<Problem> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| anyhow!("empty matrix file"))?;
    let n: usize = header
        .parse()
        .with_context(|| format!("bad dimension `{header}`"))?;
    if n == 0 {
        bail!("dimension must be at least 1");
    }
    let rows = (0..n)
        .map(|i| {
            let line = lines
                .next()
                .ok_or_else(|| anyhow!("missing matrix row {}", i + 1))?;
            parse_row(line, n, &format!("matrix row {}", i + 1))
        })
        .collect::<Result<Vec<_>>>()?;
    let a = DenseOperator::from_rows(&rows)?;
    let (f, l) = match lines.next() {
        None => (
            vec![Complex64::new(1.0, 0.0); n],
            vec![Complex64::new(1.0, 0.0); n],
        ),
        Some(f_line) => {
            let f = parse_row(f_line, n, "f")?;
            let l_line = lines.next().ok_or_else(|| anyhow!("f given without l"))?;
            (f, parse_row(l_line, n, "l")?)
        }
    };
    if lines.next().is_some() {
        bail!("unexpected trailing lines");
    }
    Ok(Problem {
        a,
        form: RankOneForm::new(Vector::new(f)?, Functional::new(l)?)?,
    })
}
