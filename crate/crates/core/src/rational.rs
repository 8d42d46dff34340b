//! Exact rationals backed by `num_rational`.

use crate::error::{input, Result};
use num_rational::Ratio;

/// Exact rational number; always kept in lowest terms with positive denominator.
pub type Rational = Ratio<i64>;

/// Parses `p/q` or an integer literal.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let parsed = if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad(t))?;
        let q: i64 = q.trim().parse().map_err(|_| bad(t))?;
        if q == 0 {
            return input(format!("zero denominator in `{t}`"));
        }
        Rational::new(p, q)
    } else {
        Rational::from_integer(t.parse().map_err(|_| bad(t))?)
    };
    Ok(parsed)
}

fn bad(t: &str) -> crate::Error {
    crate::Error::Input(format!("not a rational: `{t}`"))
}

/// Prints as `p/q`, or as an integer when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least integer `>= r`.
pub fn ceil_rational(r: &Rational) -> i64 {
    r.ceil().to_integer()
}
