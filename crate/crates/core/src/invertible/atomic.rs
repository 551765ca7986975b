use super::ExponentMatrix;
use crate::error::{Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    Fermat,
    Loop,
    Chain,
}

/// One atom. `variables[k]` carries exponent `exponents[k]` and feeds
/// `variables[k + 1]` (cyclically for loops, not at all at a chain tail).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomicBlock {
    pub kind: AtomKind,
    pub variables: Vec<usize>,
    pub exponents: Vec<u32>,
}

impl fmt::Display for AtomicBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            AtomKind::Fermat => "fermat",
            AtomKind::Loop => "loop",
            AtomKind::Chain => "chain",
        };
        write!(f, "{kind}(")?;
        for (k, e) in self.exponents.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomicDecomposition {
    pub blocks: Vec<AtomicBlock>,
    /// `owner[i]` is the variable whose leading power appears in row `i`.
    pub owner: Vec<usize>,
}

impl AtomicDecomposition {
    /// Sorted list of `(kind, exponents)`; invariant under relabelling variables.
    pub fn shape(&self) -> Vec<(AtomKind, Vec<u32>)> {
        let mut s: Vec<_> = self.blocks.iter().map(|b| (b.kind, b.exponents.clone())).collect();
        s.sort();
        s
    }

    /// Short label such as `F2L2` or `F1L3`.
    pub fn label(&self) -> String {
        let fermats = self.blocks.iter().filter(|b| b.kind == AtomKind::Fermat).count();
        let mut out = String::new();
        if fermats > 0 {
            out.push_str(&format!("F{fermats}"));
        }
        let mut rest: Vec<_> = self.blocks.iter().filter(|b| b.kind != AtomKind::Fermat).collect();
        rest.sort_by_key(|b| (b.kind, b.variables.len()));
        for b in rest {
            let c = if b.kind == AtomKind::Loop { 'L' } else { 'C' };
            out.push_str(&format!("{c}{}", b.variables.len()));
        }
        out
    }
}

/// Decompose `A` into Fermat, loop and chain atoms, or explain why not.
pub fn atomic_decomposition(a: &ExponentMatrix) -> Result<AtomicDecomposition> {
    let n = a.dim();
    for (i, row) in a.rows().iter().enumerate() {
        let support = row.iter().filter(|&&e| e > 0).count();
        if support == 0 {
            return Err(Error::NotAtomic(format!("row {i} is constant")));
        }
        if support > 2 {
            return Err(Error::NotAtomic(format!("row {i} involves {support} variables")));
        }
    }
    let mut owner = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    let mut last = None;
    if search(a, 0, &mut owner, &mut taken, &mut last) {
        return build(a, &owner).map_err(|e| e.unwrap_or_else(|| Error::NotAtomic("unreachable".into())));
    }
    Err(last.unwrap_or_else(|| Error::NotAtomic("no assignment of rows to variables".into())))
}

// Backtracking over row-to-variable assignments; n is small.
fn search(
    a: &ExponentMatrix,
    i: usize,
    owner: &mut Vec<usize>,
    taken: &mut Vec<bool>,
    last: &mut Option<Error>,
) -> bool {
    let n = a.dim();
    if i == n {
        match build(a, owner) {
            Ok(_) => return true,
            Err(e) => {
                if let Some(e) = e {
                    *last = Some(e);
                }
                return false;
            }
        }
    }
    let mut cands: Vec<usize> = (0..n).filter(|&j| a.entry(i, j) > 0 && !taken[j]).collect();
    cands.sort_by_key(|&j| core::cmp::Reverse(a.entry(i, j)));
    for j in cands {
        owner[i] = j;
        taken[j] = true;
        if search(a, i + 1, owner, taken, last) {
            return true;
        }
        taken[j] = false;
    }
    owner[i] = usize::MAX;
    false
}

fn build(a: &ExponentMatrix, owner: &[usize]) -> core::result::Result<AtomicDecomposition, Option<Error>> {
    let n = a.dim();
    let mut row_of = vec![0usize; n];
    for (i, &v) in owner.iter().enumerate() {
        row_of[v] = i;
    }
    let mut feeds = vec![None; n];
    let mut fed_by = vec![None; n];
    for v in 0..n {
        let i = row_of[v];
        for w in 0..n {
            if w == v || a.entry(i, w) == 0 {
                continue;
            }
            if a.entry(i, w) != 1 {
                return Err(Some(Error::NotAtomic(format!("row {i} has secondary exponent {}", a.entry(i, w)))));
            }
            if let Some(u) = fed_by[w] {
                return Err(Some(Error::NotAtomic(format!("variable {w} is fed by both {u} and {v}"))));
            }
            feeds[v] = Some(w);
            fed_by[w] = Some(v);
        }
    }
    let exponent = |v: usize| a.entry(row_of[v], v);
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    // paths start at variables nobody feeds
    for start in 0..n {
        if fed_by[start].is_some() {
            continue;
        }
        let mut vars = vec![start];
        seen[start] = true;
        let mut cur = start;
        while let Some(w) = feeds[cur] {
            vars.push(w);
            seen[w] = true;
            cur = w;
        }
        let tail = *vars.last().unwrap();
        if exponent(tail) < 2 {
            return Err(Some(Error::NotAtomic(format!("variable {tail} ends an atom with exponent 1"))));
        }
        let kind = if vars.len() == 1 { AtomKind::Fermat } else { AtomKind::Chain };
        let exponents = vars.iter().map(|&v| exponent(v)).collect();
        blocks.push(AtomicBlock { kind, variables: vars, exponents });
    }
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut vars = vec![start];
        seen[start] = true;
        let mut cur = feeds[start].expect("every unseen variable lies on a cycle");
        while cur != start {
            vars.push(cur);
            seen[cur] = true;
            cur = feeds[cur].expect("cycle");
        }
        let exponents: Vec<u32> = vars.iter().map(|&v| exponent(v)).collect();
        if exponents.iter().any(|&e| e < 2) {
            return Err(Some(Error::NotAtomic(format!("loop through {start} has an exponent 1"))));
        }
        blocks.push(AtomicBlock { kind: AtomKind::Loop, variables: vars, exponents });
    }
    blocks.sort_by_key(|b| b.variables[0]);
    Ok(AtomicDecomposition { blocks, owner: owner.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn shape_str(a: &ExponentMatrix) -> Vec<String> {
        atomic_decomposition(a).unwrap().blocks.iter().map(|b| format!("{b}")).collect()
    }

    #[test]
    fn table_matrices() {
        assert_eq!(shape_str(&f4()), ["fermat(4)"; 4]);
        assert_eq!(shape_str(&f2l2()), ["fermat(4)", "fermat(4)", "loop(3,3)"]);
        assert_eq!(shape_str(&f1l3()), ["fermat(4)", "loop(3,3,3)"]);
        assert_eq!(shape_str(&l2l2()), ["loop(3,3)", "loop(3,3)"]);
        assert_eq!(shape_str(&l4()), ["loop(3,3,3,3)"]);
        assert_eq!(shape_str(&chain_cubic()), ["chain(2,2,3)"]);
        assert_eq!(shape_str(&chain_quintic()), ["chain(2,5)", "fermat(5)", "fermat(5)"]);
    }

    #[test]
    fn labels() {
        assert_eq!(atomic_decomposition(&f4()).unwrap().label(), "F4");
        assert_eq!(atomic_decomposition(&f2l2()).unwrap().label(), "F2L2");
        assert_eq!(atomic_decomposition(&f1l3()).unwrap().label(), "F1L3");
        assert_eq!(atomic_decomposition(&l2l2()).unwrap().label(), "L2L2");
        assert_eq!(atomic_decomposition(&l4()).unwrap().label(), "L4");
        assert_eq!(atomic_decomposition(&chain_cubic()).unwrap().label(), "C3");
    }

    #[test]
    fn loop_order_follows_feeding() {
        let d = atomic_decomposition(&l4()).unwrap();
        assert_eq!(d.blocks[0].variables, [0, 1, 2, 3]);
        let d = atomic_decomposition(&chain_cubic()).unwrap();
        assert_eq!(d.blocks[0].variables, [0, 1, 2]);
    }

    #[test]
    fn permutation_invariance() {
        let perms: [[usize; 4]; 4] = [[3, 1, 0, 2], [2, 3, 1, 0], [1, 0, 3, 2], [0, 2, 3, 1]];
        for m in [f2l2(), f1l3(), l2l2(), l4(), chain_quintic()] {
            let base = atomic_decomposition(&m).unwrap().shape();
            for p in &perms {
                assert_eq!(atomic_decomposition(&m.permuted(p)).unwrap().shape(), base);
            }
        }
    }

    #[test]
    fn rejections() {
        let three = ExponentMatrix::new(vec![vec![2, 1, 1], vec![0, 3, 0], vec![0, 0, 3]]).unwrap();
        assert!(matches!(atomic_decomposition(&three), Err(Error::NotAtomic(_))));
        let linear = ExponentMatrix::diagonal(&[1, 3]);
        assert!(matches!(atomic_decomposition(&linear), Err(Error::NotAtomic(_))));
        // x^3 y + z^3 y + y^3: y fed twice
        let twice = ExponentMatrix::new(vec![vec![3, 1, 0], vec![0, 3, 0], vec![0, 1, 3]]).unwrap();
        assert!(matches!(atomic_decomposition(&twice), Err(Error::NotAtomic(_))));
        let squared = ExponentMatrix::new(vec![vec![3, 2], vec![0, 3]]).unwrap();
        assert!(matches!(atomic_decomposition(&squared), Err(Error::NotAtomic(_))));
    }
}
