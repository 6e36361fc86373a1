use std::fmt::Write;

use lonely_spectrum::Rational;
use serde::Serialize;
use serde_json::Value;

pub const SIG_DIGITS: usize = 12;

/// `p/q (≈ decimal)`; integers print bare.
pub fn exact(r: &Rational) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        format!("{} (≈ {})", r, r.to_decimal(SIG_DIGITS))
    }
}

pub fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// What a verb produced: a text rendering, a JSON record, and for checks a
/// verdict.
pub struct Output {
    pub text: String,
    pub record: Value,
    pub pass: Option<bool>,
}

impl Output {
    pub fn new<R: Serialize>(record: &R) -> Self {
        Output {
            text: String::new(),
            record: serde_json::to_value(record).expect("records serialize"),
            pass: None,
        }
    }

    pub fn check(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn field(&mut self, key: &str, value: impl AsRef<str>) {
        let _ = writeln!(self.text, "{} = {}", key, value.as_ref());
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.record).expect("json");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_first() {
        assert_eq!(exact(&Rational::new(7, 30)), "7/30 (≈ 0.233333333333)");
        assert_eq!(exact(&Rational::from(3)), "3");
        assert_eq!(exact(&Rational::new(-1, 4)), "-1/4 (≈ -0.25)");
    }
}
