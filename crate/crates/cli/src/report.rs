use bhkzeta_core::ff::FieldTable;
use bhkzeta_core::intpoly::IntPoly;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

/// Field modulus and generator behind every table a command used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub p: u64,
    pub r: u32,
    pub modulus: Vec<u64>,
    pub generator: u32,
}

impl From<&FieldTable> for Fingerprint {
    fn from(f: &FieldTable) -> Self {
        let pp = f.prime_power();
        Self { p: pp.p, r: pp.r, modulus: f.modulus().to_vec(), generator: f.generator() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs: Value,
    pub results: Value,
    /// Milliseconds per phase.
    pub timings: BTreeMap<String, u64>,
    pub version: String,
    pub fingerprint: Vec<Fingerprint>,
    /// Whether every check in `results` held.
    pub verified: bool,
}

impl Report {
    pub fn new(command: Vec<String>, inputs: Value) -> Self {
        Self {
            command,
            inputs,
            results: Value::Null,
            timings: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            fingerprint: Vec::new(),
            verified: true,
        }
    }

    pub fn field(&mut self, f: &FieldTable) {
        let fp = Fingerprint::from(f);
        if !self.fingerprint.contains(&fp) {
            self.fingerprint.push(fp);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Coefficients low degree first, as decimal strings.
pub fn coefficients(p: &IntPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

/// `(1 - 281T)^19 (1 + 78T + 281^2T^2)`.
pub fn display_factors(factors: &[(IntPoly, u32)], q: u64) -> String {
    let q2 = num_bigint::BigInt::from(q).pow(2);
    factors
        .iter()
        .map(|(p, k)| {
            let mut body = String::from("1");
            for (i, c) in p.coeffs().iter().enumerate().skip(1) {
                if c.sign() == num_bigint::Sign::NoSign {
                    continue;
                }
                let sign = if c.sign() == num_bigint::Sign::Minus { " - " } else { " + " };
                let mag = c.magnitude().to_string();
                let mag = if c.magnitude() == q2.magnitude() { format!("{q}^2") } else { mag };
                let t = if i == 1 { "T".to_string() } else { format!("T^{i}") };
                body.push_str(&format!("{sign}{mag}{t}"));
            }
            if *k > 1 {
                format!("({body})^{k}")
            } else {
                format!("({body})")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn display() {
        let f = vec![(IntPoly::linear(BigInt::from(-281)), 19), (IntPoly::from_i64s(&[1, 78, 78961]), 1)];
        assert_eq!(display_factors(&f, 281), "(1 - 281T)^19 (1 + 78T + 281^2T^2)");
    }

    #[test]
    fn round_trip() {
        let mut r = Report::new(vec!["count".into()], serde_json::json!({"q": "73"}));
        r.results = serde_json::json!({"count": 5761, "poly": ["1", "-2"]});
        r.field(&FieldTable::new(73, 1).unwrap());
        r.timings.insert("count".into(), 3);
        let s = r.to_json();
        let back = Report::from_json(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), s);
    }
}
