//! Invariant-subspace decomposition of Pauli operators.
//!
//! Basis states linked by a nonzero matrix element of any operator in a set
//! are merged with union-find; every operator in the set is then
//! block-diagonal on the resulting sectors. Heisenberg chains split into
//! magnetization sectors this way and X-Y-Z groupings into parity sectors,
//! which is what keeps the `n = 10..12` dense checks cheap.

use faer::Mat;
use num_complex::Complex64 as C64;

use crate::dense::{self, DenseOperator, HermitianEigen};
use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// Largest qubit count for a compact operator.
pub const MAX_COMPACT_QUBITS: usize = 30;

/// Operator relabelled onto `k` qubits, terms grouped by X mask.
#[derive(Clone, Debug)]
pub struct CompactOp {
    pub k: usize,
    terms: Vec<(u64, u64, C64)>,
}

impl CompactOp {
    /// Relabels qubit `positions[j]` of `s` as qubit `j`. Terms acting outside
    /// `positions` are an error.
    pub fn from_sum(s: &PauliSum, positions: &[usize]) -> Result<Self> {
        let k = positions.len();
        if k > MAX_COMPACT_QUBITS {
            return Err(Error::Cap(format!("{k} qubits is too many for a dense block")));
        }
        let keep = crate::pauli::Mask::from_bits(positions.iter().copied());
        let mut terms = Vec::with_capacity(s.len());
        for t in s.terms() {
            if (t.support() & keep) != t.support() {
                return Err(Error::Input("operator acts outside the given positions".into()));
            }
            let y = (t.x & t.z).count();
            // Store the coefficient of the bare X^x Z^z product.
            let phase = match y % 4 {
                0 => C64::new(1.0, 0.0),
                1 => C64::new(0.0, 1.0),
                2 => C64::new(-1.0, 0.0),
                _ => C64::new(0.0, -1.0),
            };
            terms.push((t.x.compress(positions), t.z.compress(positions), t.coeff * phase));
        }
        terms.sort_by_key(|a| (a.0, a.1));
        Ok(CompactOp { k, terms })
    }

    /// Keeps all `n` qubits of `s`.
    pub fn full(s: &PauliSum) -> Result<Self> {
        let positions: Vec<usize> = (0..s.n()).collect();
        Self::from_sum(s, &positions)
    }

    /// Compacts onto the support of `s` and returns the support too.
    pub fn on_support(s: &PauliSum) -> Result<(Self, Vec<usize>)> {
        let positions: Vec<usize> = s.support_mask().iter().collect();
        Ok((Self::from_sum(s, &positions)?, positions))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn scale(&self) -> f64 {
        self.terms.iter().map(|t| t.2.norm()).fold(0.0, f64::max)
    }

    /// Calls `f(col, row, amplitude)` for every nonzero off-diagonal and
    /// diagonal element, summing strings that share an X mask first.
    fn for_each_element(&self, states: impl Iterator<Item = u64> + Clone, mut f: impl FnMut(u64, u64, C64)) {
        let tol = 1e-14 * self.scale();
        let mut start = 0;
        while start < self.terms.len() {
            let x = self.terms[start].0;
            let mut end = start;
            while end < self.terms.len() && self.terms[end].0 == x {
                end += 1;
            }
            let group = &self.terms[start..end];
            for b in states.clone() {
                let mut amp = C64::new(0.0, 0.0);
                for &(_, z, c) in group {
                    if (z & b).count_ones() % 2 == 1 {
                        amp -= c;
                    } else {
                        amp += c;
                    }
                }
                if amp.norm() > tol {
                    f(b, b ^ x, amp);
                }
            }
            start = end;
        }
    }
}

/// Partition of the `2^k` basis states into invariant sectors.
#[derive(Clone, Debug)]
pub struct Sectors {
    k: usize,
    blocks: Vec<Vec<u64>>,
    loc: Vec<(u32, u32)>,
}

impl Sectors {
    /// A single sector holding every state.
    pub fn trivial(k: usize) -> Self {
        let dim = 1u64 << k;
        Sectors { k, blocks: vec![(0..dim).collect()], loc: (0..dim as u32).map(|i| (0, i)).collect() }
    }

    /// Finest partition leaving every operator in `ops` block-diagonal.
    pub fn of(k: usize, ops: &[&CompactOp]) -> Self {
        let dim = 1usize << k;
        let mut parent: Vec<u32> = (0..dim as u32).collect();
        fn find(p: &mut [u32], mut a: u32) -> u32 {
            while p[a as usize] != a {
                p[a as usize] = p[p[a as usize] as usize];
                a = p[a as usize];
            }
            a
        }
        for op in ops {
            assert_eq!(op.k, k, "operator qubit count differs from sector qubit count");
            op.for_each_element(0..dim as u64, |col, row, _| {
                if row != col {
                    let (a, b) = (find(&mut parent, col as u32), find(&mut parent, row as u32));
                    if a != b {
                        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                        parent[hi as usize] = lo;
                    }
                }
            });
        }
        let mut block_of_root = vec![u32::MAX; dim];
        let mut blocks: Vec<Vec<u64>> = Vec::new();
        let mut loc = vec![(0u32, 0u32); dim];
        for s in 0..dim {
            let r = find(&mut parent, s as u32) as usize;
            if block_of_root[r] == u32::MAX {
                block_of_root[r] = blocks.len() as u32;
                blocks.push(Vec::new());
            }
            let bi = block_of_root[r];
            loc[s] = (bi, blocks[bi as usize].len() as u32);
            blocks[bi as usize].push(s as u64);
        }
        Sectors { k, blocks, loc }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.blocks
    }

    pub fn largest(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Block matrices of `op`; fails if `op` couples two sectors.
    pub fn restrict(&self, op: &CompactOp) -> Result<BlockOp> {
        if op.k != self.k {
            return Err(Error::Dimension(format!("operator on {} qubits, sectors on {}", op.k, self.k)));
        }
        let mut blocks: Vec<Mat<C64>> = self.blocks.iter().map(|b| Mat::zeros(b.len(), b.len())).collect();
        let mut leak = false;
        let dim = 1u64 << self.k;
        op.for_each_element(0..dim, |col, row, amp| {
            let (bc, ic) = self.loc[col as usize];
            let (br, ir) = self.loc[row as usize];
            if bc != br {
                leak = true;
            } else {
                blocks[bc as usize][(ir as usize, ic as usize)] += amp;
            }
        });
        if leak {
            return Err(Error::Contract("operator is not block-diagonal in these sectors".into()));
        }
        Ok(BlockOp { blocks })
    }

    /// Reassembles a block operator into the full `2^k` matrix.
    pub fn assemble(&self, op: &BlockOp) -> DenseOperator {
        let mut d = DenseOperator::zeros(1 << self.k);
        for (states, m) in self.blocks.iter().zip(&op.blocks) {
            for (j, &c) in states.iter().enumerate() {
                for (i, &r) in states.iter().enumerate() {
                    let v = m[(i, j)];
                    if v != C64::new(0.0, 0.0) {
                        d.add_at(r as usize, c as usize, v);
                    }
                }
            }
        }
        d
    }

    /// Restriction of a full dense matrix (entries outside the blocks are
    /// ignored).
    pub fn split(&self, d: &DenseOperator) -> BlockOp {
        let blocks = self
            .blocks
            .iter()
            .map(|states| Mat::from_fn(states.len(), states.len(), |i, j| d.get(states[i] as usize, states[j] as usize)))
            .collect();
        BlockOp { blocks }
    }
}

/// Block-diagonal operator on a [`Sectors`] partition.
#[derive(Clone, Debug)]
pub struct BlockOp {
    pub blocks: Vec<Mat<C64>>,
}

impl BlockOp {
    pub fn identity(s: &Sectors) -> Self {
        BlockOp { blocks: s.blocks.iter().map(|b| Mat::identity(b.len(), b.len())).collect() }
    }

    fn zip(&self, o: &BlockOp, f: impl Fn(&Mat<C64>, &Mat<C64>) -> Mat<C64>) -> BlockOp {
        assert_eq!(self.blocks.len(), o.blocks.len(), "block structures differ");
        BlockOp { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn matmul(&self, o: &BlockOp) -> BlockOp {
        self.zip(o, |a, b| a * b)
    }

    pub fn add(&self, o: &BlockOp) -> BlockOp {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &BlockOp) -> BlockOp {
        self.zip(o, |a, b| a - b)
    }

    pub fn commutator(&self, o: &BlockOp) -> BlockOp {
        self.zip(o, |a, b| a * b - b * a)
    }

    pub fn scale(&self, c: C64) -> BlockOp {
        BlockOp {
            blocks: self.blocks.iter().map(|m| Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * c)).collect(),
        }
    }

    pub fn adjoint(&self) -> BlockOp {
        BlockOp { blocks: self.blocks.iter().map(|m| m.adjoint().to_owned()).collect() }
    }

    pub fn pow(&self, k: u64) -> BlockOp {
        BlockOp { blocks: self.blocks.iter().map(|m| dense::mat_pow(m.as_ref(), k)).collect() }
    }

    pub fn trace(&self) -> C64 {
        self.blocks.iter().map(|m| (0..m.nrows()).map(|i| m[(i, i)]).sum::<C64>()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(|m| dense::max_abs(m.as_ref())).fold(0.0, f64::max)
    }

    /// Spectral norm: the largest block norm.
    pub fn spectral_norm(&self) -> f64 {
        self.blocks.iter().map(|m| dense::spectral_norm(m.as_ref())).fold(0.0, f64::max)
    }

    /// Spectral norm of an operator known to be Hermitian.
    pub fn hermitian_norm(&self) -> f64 {
        self.blocks.iter().map(|m| dense::hermitian_norm(m.as_ref())).fold(0.0, f64::max)
    }

    pub fn eigh(&self) -> Result<Vec<HermitianEigen>> {
        self.blocks.iter().map(|m| HermitianEigen::of(m.as_ref())).collect()
    }

    /// All eigenvalues of a Hermitian block operator, nonincreasing.
    pub fn eigvals_hermitian(&self) -> Result<Vec<f64>> {
        let mut all = Vec::new();
        for m in &self.blocks {
            all.extend(dense::hermitian_eigvals(m.as_ref())?);
        }
        all.sort_by(|a, b| b.total_cmp(a));
        Ok(all)
    }
}

/// Exact spectral norm of a Pauli sum, computed on its support and split
/// into sectors. Hermitian and anti-Hermitian sums use the Hermitian solver.
pub fn pauli_norm(s: &PauliSum) -> Result<f64> {
    if s.is_empty() {
        return Ok(0.0);
    }
    if s.len() == 1 {
        return Ok(s.coefficient_one_norm());
    }
    let (op, _) = CompactOp::on_support(s)?;
    dense::check_cap(op.k)?;
    let sectors = Sectors::of(op.k, &[&op]);
    let b = sectors.restrict(&op)?;
    if s.is_hermitian(0.0) {
        Ok(b.hermitian_norm())
    } else if s.is_anti_hermitian(0.0) {
        Ok(b.scale(C64::new(0.0, 1.0)).hermitian_norm())
    } else {
        Ok(b.spectral_norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliTerm, parse_term};

    fn sum(n: usize, items: &[(&str, f64)]) -> PauliSum {
        PauliSum::from_terms(
            n,
            items.iter().map(|&(s, c)| {
                let mut t = parse_term(s).unwrap();
                t.coeff *= c;
                t
            }),
        )
        .unwrap()
    }

    #[test]
    fn heisenberg_bond_conserves_magnetization() {
        let h = sum(3, &[("XXI", 1.0), ("YYI", 1.0), ("ZZI", 1.0), ("IXX", 1.0), ("IYY", 1.0), ("IZZ", 1.0)]);
        let op = CompactOp::full(&h).unwrap();
        let s = Sectors::of(3, &[&op]);
        let mut sizes: Vec<usize> = s.blocks().iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 3, 3]);
        let b = s.restrict(&op).unwrap();
        let full = h.to_dense().unwrap();
        assert!(s.assemble(&b).sub(&full).max_abs() < 1e-15);
    }

    #[test]
    fn restrict_rejects_coupling_operator() {
        let zz = sum(2, &[("ZZ", 1.0)]);
        let x = sum(2, &[("XI", 1.0)]);
        let s = Sectors::of(2, &[&CompactOp::full(&zz).unwrap()]);
        assert_eq!(s.blocks().len(), 4);
        assert!(s.restrict(&CompactOp::full(&x).unwrap()).is_err());
    }

    #[test]
    fn pauli_norm_matches_dense() {
        let s = sum(4, &[("XIZI", 0.7), ("ZZII", -0.4), ("IYYX", 1.3), ("IIIZ", 0.2)]);
        let want = s.to_dense().unwrap().spectral_norm();
        assert!((pauli_norm(&s).unwrap() - want).abs() < 1e-12);
        let c = crate::pauli::commutator(&s, &sum(4, &[("YIIX", 1.0)])).unwrap();
        let want = c.to_dense().unwrap().spectral_norm();
        assert!((pauli_norm(&c).unwrap() - want).abs() < 1e-12);
        let single = PauliSum::from_term(PauliTerm::from_ops(40, 2.5, &[(37, 'Y')]));
        assert!((pauli_norm(&single).unwrap() - 2.5).abs() < 1e-15);
    }
}
