//! Minimal CSV writer: `#` metadata lines, a header, LF endings, and numbers
//! with 17 significant digits so every field reparses to the same double.

use std::fmt::Write as _;

pub const POLE_FLAG: &str = "flag=pole";
pub const LOST_FLAG: &str = "flag=lost";

/// 17 significant digits; non-finite values as `inf`, `-inf`, `nan`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

pub struct Table {
    buf: String,
    columns: usize,
}

impl Table {
    pub fn new(meta: &[(&str, String)], header: &[&str]) -> Self {
        let mut buf = String::new();
        for (k, v) in meta {
            writeln!(buf, "# {k}: {v}").unwrap();
        }
        writeln!(buf, "{}", header.join(",")).unwrap();
        Self { buf, columns: header.len() }
    }

    /// Append a row; `fields` must fill every column.
    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.columns);
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1194, 1.0 / 3.0, 7.1917e-5, -2.3, f64::MIN_POSITIVE, 1e300, 0.0] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let digits: String = s.split('e').next().unwrap().chars().filter(char::is_ascii_digit).collect();
            assert_eq!(digits.len(), 17);
        }
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(f64::NAN), "nan");
    }

    #[test]
    fn layout() {
        let mut t = Table::new(&[("tool", "x".into())], &["a", "b"]);
        t.row(&[num(1.0), String::new()]);
        assert_eq!(t.finish(), "# tool: x\na,b\n1.0000000000000000e0,\n");
    }
}
