//! Deterministic JSON emission: every f64 is rendered with 17 significant
//! digits ({:.16e}), so identical values always serialize to identical
//! bytes. Non-finite values become null (JSON has no infinities; the
//! partial-trace ratio's +inf marker serializes as null).

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::Result;

struct SigDigits17;

impl Formatter for SigDigits17 {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize to a compact JSON string with fixed float formatting and a
/// trailing newline.
pub fn to_json(value: &impl Serialize) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits17);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("json is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        a: f64,
        b: f64,
        c: Vec<f64>,
        n: usize,
    }

    #[test]
    fn floats_have_17_significant_digits() {
        let s = to_json(&Sample {
            a: 1.0 / 3.0,
            b: f64::INFINITY,
            c: vec![0.1, -2.5e-10],
            n: 7,
        })
        .unwrap();
        assert!(s.contains("3.3333333333333331e-1"), "{s}");
        assert!(s.contains("\"b\":null"), "{s}");
        assert!(s.contains("-2.500000000000000"), "{s}");
        assert!(s.ends_with('\n'));
    }

    #[test]
    fn byte_identical_across_calls() {
        let v = vec![0.1 + 0.2, 1e300, -0.0];
        assert_eq!(to_json(&v).unwrap(), to_json(&v).unwrap());
    }
}
