use crate::ff::FieldTable;
use alloc::vec::Vec;

/// Sparse polynomial over a finite field; coefficients in integer encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(u32, Vec<u32>)>,
}

impl Polynomial {
    /// Merges equal monomials and drops zero coefficients.
    pub fn new(nvars: usize, terms: Vec<(u32, Vec<u32>)>, f: &FieldTable) -> Self {
        let mut merged: Vec<(u32, Vec<u32>)> = Vec::new();
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "monomial arity");
            match merged.iter_mut().find(|(_, m)| *m == e) {
                Some(t) => t.0 = f.add(t.0, c),
                None => merged.push((c, e)),
            }
        }
        merged.retain(|(c, _)| *c != 0);
        Self { nvars, terms: merged }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(u32, Vec<u32>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[u32], f: &FieldTable) -> u32 {
        let n = f.q_times();
        let mut logs = [0u64; 16];
        let mut zero = [false; 16];
        let big = self.nvars > 16;
        if !big {
            for (j, &v) in x.iter().enumerate() {
                zero[j] = v == 0;
                if v != 0 {
                    logs[j] = f.log_unchecked(v) as u64;
                }
            }
        }
        let mut acc = 0u32;
        for (c, e) in &self.terms {
            let m = if big {
                e.iter().zip(x).fold(*c, |m, (&k, &v)| f.mul(m, f.pow_u(v, k)))
            } else {
                let mut l = f.log_unchecked(*c) as u64;
                let mut vanishes = false;
                for (j, &k) in e.iter().enumerate() {
                    if k > 0 {
                        if zero[j] {
                            vanishes = true;
                            break;
                        }
                        l += k as u64 * logs[j];
                    }
                }
                if vanishes {
                    0
                } else {
                    f.exp(l % n)
                }
            };
            acc = f.add(acc, m);
        }
        acc
    }

    /// Formal partial derivative in variable `j`.
    pub fn derivative(&self, j: usize, f: &FieldTable) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e[j] > 0)
            .map(|(c, e)| {
                let mut e = e.clone();
                let k = f.from_int((e[j] as u64 % f.p()) as i64);
                e[j] -= 1;
                (f.mul(*c, k), e)
            })
            .collect();
        Self::new(self.nvars, terms, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn merge_and_derivative() {
        let f = FieldTable::new(7, 1).unwrap();
        let p = Polynomial::new(2, vec![(1, vec![2, 0]), (3, vec![2, 0]), (5, vec![0, 7])], &f);
        assert_eq!(p.terms().len(), 2);
        assert_eq!(p.eval(&[2, 3], &f), (4 * 4 + 5 * 3u32.pow(7)) % 7);
        let dx = p.derivative(0, &f);
        assert_eq!(dx.terms(), &[(1, vec![1, 0])]);
        assert!(p.derivative(1, &f).is_zero());
    }

    #[test]
    fn extension_field_evaluation() {
        let f = FieldTable::new(3, 2).unwrap();
        let p = Polynomial::new(2, vec![(1, vec![2, 0]), (1, vec![0, 2])], &f);
        for a in f.elements() {
            for b in f.elements() {
                let direct = f.add(f.mul(a, a), f.mul(b, b));
                assert_eq!(p.eval(&[a, b], &f), direct);
            }
        }
    }
}
