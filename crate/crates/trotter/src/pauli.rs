//! Pauli-string operators stored as (X mask, Z mask) pairs with a complex
//! coefficient.
//!
//! A string with masks `(x, z)` denotes `i^{|x & z|} X^x Z^z`, so a bit set in
//! both masks is a `Y` on that qubit. Qubit 0 is the least significant tensor
//! factor of the dense matrix and the leftmost letter of the text form.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor};

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::dense::DenseOperator;
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest qubit count a mask can hold.
pub const MAX_QUBITS: usize = 256;

/// Coefficients below this magnitude are dropped by [`PauliSum::simplify`].
pub const DROP_TOL: f64 = 1e-14;

const WORDS: usize = MAX_QUBITS / 64;

/// Fixed-width qubit bitset.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mask([u64; WORDS]);

impl Mask {
    pub const EMPTY: Mask = Mask([0; WORDS]);

    pub fn bit(q: usize) -> Mask {
        let mut m = Mask::EMPTY;
        m.set(q);
        m
    }

    pub fn from_bits(bits: impl IntoIterator<Item = usize>) -> Mask {
        let mut m = Mask::EMPTY;
        for q in bits {
            m.set(q);
        }
        m
    }

    pub fn set(&mut self, q: usize) {
        assert!(q < MAX_QUBITS, "qubit {q} exceeds mask width");
        self.0[q / 64] |= 1 << (q % 64);
    }

    pub fn get(&self, q: usize) -> bool {
        q < MAX_QUBITS && (self.0[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    /// Highest set bit plus one, or 0 for the empty mask.
    pub fn width(&self) -> usize {
        for (i, &w) in self.0.iter().enumerate().rev() {
            if w != 0 {
                return 64 * i + 64 - w.leading_zeros() as usize;
            }
        }
        0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width()).filter(move |&q| self.get(q))
    }

    /// The low 64 bits; callers must know the mask fits.
    pub fn low(&self) -> u64 {
        self.0[0]
    }

    pub fn from_low(bits: u64) -> Mask {
        let mut m = Mask::EMPTY;
        m.0[0] = bits;
        m
    }

    /// Gathers the bits at `positions` into a compact mask (position k of the
    /// result is bit `positions[k]` of `self`).
    pub fn compress(&self, positions: &[usize]) -> u64 {
        let mut out = 0u64;
        for (k, &q) in positions.iter().enumerate() {
            if self.get(q) {
                out |= 1 << k;
            }
        }
        out
    }
}

impl BitXor for Mask {
    type Output = Mask;
    fn bitxor(self, o: Mask) -> Mask {
        let mut m = self;
        for (a, b) in m.0.iter_mut().zip(o.0) {
            *a ^= b;
        }
        m
    }
}

impl BitAnd for Mask {
    type Output = Mask;
    fn bitand(self, o: Mask) -> Mask {
        let mut m = self;
        for (a, b) in m.0.iter_mut().zip(o.0) {
            *a &= b;
        }
        m
    }
}

impl BitOr for Mask {
    type Output = Mask;
    fn bitor(self, o: Mask) -> Mask {
        let mut m = self;
        for (a, b) in m.0.iter_mut().zip(o.0) {
            *a |= b;
        }
        m
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// `i^k` for `k` taken mod 4.
fn i_pow(k: u32) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Phase `i^k` with `P(x1,z1) P(x2,z2) = i^k P(x1^x2, z1^z2)`.
fn product_phase(x1: Mask, z1: Mask, x2: Mask, z2: Mask) -> u32 {
    let y1 = (x1 & z1).count();
    let y2 = (x2 & z2).count();
    let swap = (z1 & x2).count();
    let y = ((x1 ^ x2) & (z1 ^ z2)).count();
    // i^{y1+y2} (-1)^{swap} i^{-y}
    (y1 + y2 + 2 * swap + 4 * MAX_QUBITS as u32 - y) % 4
}

fn anticommutes(x1: Mask, z1: Mask, x2: Mask, z2: Mask) -> bool {
    ((x1 & z2).count() + (z1 & x2).count()) % 2 == 1
}

/// A single weighted Pauli string.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliTerm {
    pub n: usize,
    pub x: Mask,
    pub z: Mask,
    pub coeff: C64,
}

impl PauliTerm {
    pub fn new(n: usize, x: Mask, z: Mask, coeff: C64) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::Dimension(format!("{n} qubits exceeds {MAX_QUBITS}")));
        }
        if x.width() > n || z.width() > n {
            return Err(Error::Dimension(format!("mask wider than n = {n}")));
        }
        Ok(PauliTerm { n, x, z, coeff })
    }

    pub fn identity(n: usize, coeff: f64) -> Self {
        PauliTerm { n, x: Mask::EMPTY, z: Mask::EMPTY, coeff: coeff.into() }
    }

    /// Builds a term from `(qubit, letter)` pairs, letters in `IXYZ`.
    pub fn from_ops(n: usize, coeff: f64, ops: &[(usize, char)]) -> Self {
        let (mut x, mut z) = (Mask::EMPTY, Mask::EMPTY);
        for &(q, c) in ops {
            assert!(q < n, "qubit {q} out of range for n = {n}");
            match c {
                'X' => x.set(q),
                'Z' => z.set(q),
                'Y' => {
                    x.set(q);
                    z.set(q)
                }
                'I' => {}
                _ => panic!("unknown Pauli letter {c}"),
            }
        }
        PauliTerm { n, x, z, coeff: coeff.into() }
    }

    pub fn support(&self) -> Mask {
        self.x | self.z
    }

    pub fn letter(&self, q: usize) -> char {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn letters(&self) -> String {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    pub fn commutes_with(&self, o: &PauliTerm) -> bool {
        !anticommutes(self.x, self.z, o.x, o.z)
    }

    /// Spectral norm of a single string.
    pub fn norm(&self) -> f64 {
        self.coeff.norm()
    }
}

/// Exact matrix product of two terms.
pub fn multiply(p: &PauliTerm, q: &PauliTerm) -> Result<PauliTerm> {
    if p.n != q.n {
        return Err(Error::Dimension(format!("qubit counts {} and {} differ", p.n, q.n)));
    }
    let k = product_phase(p.x, p.z, q.x, q.z);
    Ok(PauliTerm { n: p.n, x: p.x ^ q.x, z: p.z ^ q.z, coeff: p.coeff * q.coeff * i_pow(k) })
}

/// A simplified sum of Pauli strings, sorted by `(x, z)` with unique keys.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PauliSum {
    n: usize,
    terms: Vec<(Mask, Mask, C64)>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum { n, terms: Vec::new() }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        let mut acc = Accumulator::new(n);
        for t in terms {
            if t.n != n {
                return Err(Error::Dimension(format!("term on {} qubits in a sum on {n}", t.n)));
            }
            acc.add(t.x, t.z, t.coeff);
        }
        Ok(acc.finish())
    }

    pub fn from_term(t: PauliTerm) -> Self {
        let mut acc = Accumulator::new(t.n);
        acc.add(t.x, t.z, t.coeff);
        acc.finish()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = PauliTerm> + '_ {
        self.terms.iter().map(|&(x, z, coeff)| PauliTerm { n: self.n, x, z, coeff })
    }

    /// Coefficient of the string `(x, z)`, zero if absent.
    pub fn coeff(&self, x: Mask, z: Mask) -> C64 {
        match self.terms.binary_search_by(|&(a, b, _)| (a, b).cmp(&(x, z))) {
            Ok(i) => self.terms[i].2,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn scale(&self, c: C64) -> PauliSum {
        let mut acc = Accumulator::new(self.n);
        for &(x, z, v) in &self.terms {
            acc.add(x, z, v * c);
        }
        acc.finish()
    }

    pub fn add(&self, o: &PauliSum) -> Result<PauliSum> {
        self.check_n(o)?;
        let mut acc = Accumulator::new(self.n);
        for &(x, z, v) in self.terms.iter().chain(&o.terms) {
            acc.add(x, z, v);
        }
        Ok(acc.finish())
    }

    pub fn sub(&self, o: &PauliSum) -> Result<PauliSum> {
        self.add(&o.scale(C64::new(-1.0, 0.0)))
    }

    /// Sum of many operators on the same qubits.
    pub fn sum<'a>(n: usize, parts: impl IntoIterator<Item = &'a PauliSum>) -> Result<PauliSum> {
        let mut acc = Accumulator::new(n);
        for p in parts {
            if p.n != n {
                return Err(Error::Dimension(format!("sum on {} qubits, expected {n}", p.n)));
            }
            for &(x, z, v) in &p.terms {
                acc.add(x, z, v);
            }
        }
        Ok(acc.finish())
    }

    pub fn mul(&self, o: &PauliSum) -> Result<PauliSum> {
        self.check_n(o)?;
        let mut acc = Accumulator::new(self.n);
        for &(x1, z1, a) in &self.terms {
            for &(x2, z2, b) in &o.terms {
                let k = product_phase(x1, z1, x2, z2);
                acc.add(x1 ^ x2, z1 ^ z2, a * b * i_pow(k));
            }
        }
        Ok(acc.finish())
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum { n: self.n, terms: self.terms.iter().map(|&(x, z, v)| (x, z, v.conj())).collect() }
    }

    /// True when every coefficient is real, i.e. the operator is Hermitian.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.2.im.abs() <= tol)
    }

    /// True when every coefficient is imaginary.
    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.2.re.abs() <= tol)
    }

    /// Qubits acted on non-trivially by some term.
    pub fn support_mask(&self) -> Mask {
        self.terms.iter().fold(Mask::EMPTY, |m, &(x, z, _)| m | x | z)
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.support_mask().iter().collect()
    }

    /// Σ|coeff|, an upper bound on the spectral norm.
    pub fn coefficient_one_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.2.norm()).fold(0.0, |a, b| a + b)
    }

    /// Re-embeds the operator on `n` qubits; fails if support does not fit.
    pub fn with_n(&self, n: usize) -> Result<PauliSum> {
        if self.support_mask().width() > n {
            return Err(Error::Dimension(format!("support does not fit in {n} qubits")));
        }
        Ok(PauliSum { n, terms: self.terms.clone() })
    }

    /// Keeps the terms for which `keep` returns true.
    pub fn filter(&self, mut keep: impl FnMut(&PauliTerm) -> bool) -> PauliSum {
        let terms = self
            .terms
            .iter()
            .copied()
            .filter(|&(x, z, coeff)| keep(&PauliTerm { n: self.n, x, z, coeff }))
            .collect();
        PauliSum { n: self.n, terms }
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        to_dense(self)
    }

    /// Drops coefficients below [`DROP_TOL`].
    pub fn simplify(&self) -> PauliSum {
        self.filter(|t| t.coeff.norm() >= DROP_TOL)
    }

    fn check_n(&self, o: &PauliSum) -> Result<()> {
        if self.n != o.n {
            return Err(Error::Dimension(format!("qubit counts {} and {} differ", self.n, o.n)));
        }
        Ok(())
    }

    /// Parses the text form, e.g. `"1.5*XIZY"`, one term per entry.
    pub fn parse_terms<'a>(n: usize, items: impl IntoIterator<Item = (&'a str, C64)>) -> Result<PauliSum> {
        let mut acc = Accumulator::new(n);
        for (s, c) in items {
            let t = parse_term(s)?;
            if t.n != n {
                return Err(Error::Input(format!("string {s:?} has {} letters, expected {n}", t.n)));
            }
            acc.add(t.x, t.z, t.coeff * c);
        }
        Ok(acc.finish())
    }
}

/// Parses `"[coeff*]LETTERS"` with a real coefficient.
pub fn parse_term(s: &str) -> Result<PauliTerm> {
    let (coeff, letters) = match s.split_once('*') {
        Some((c, l)) => {
            let c: f64 = c.trim().parse().map_err(|_| Error::Input(format!("bad coefficient in {s:?}")))?;
            (c, l.trim())
        }
        None => (1.0, s.trim()),
    };
    let n = letters.chars().count();
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Input(format!("bad Pauli string {s:?}")));
    }
    let (mut x, mut z) = (Mask::EMPTY, Mask::EMPTY);
    for (q, c) in letters.chars().enumerate() {
        match c {
            'I' => {}
            'X' => x.set(q),
            'Y' => {
                x.set(q);
                z.set(q);
            }
            'Z' => z.set(q),
            _ => return Err(Error::Input(format!("bad Pauli letter {c:?} in {s:?}"))),
        }
    }
    Ok(PauliTerm { n, x, z, coeff: coeff.into() })
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if t.coeff.im == 0.0 {
                write!(f, "{}*{}", t.coeff.re, t.letters())?;
            } else {
                write!(f, "({}{:+}i)*{}", t.coeff.re, t.coeff.im, t.letters())?;
            }
        }
        Ok(())
    }
}

/// Hash accumulator that yields a sorted, simplified sum.
struct Accumulator {
    n: usize,
    map: FxHashMap<(Mask, Mask), C64>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Accumulator { n, map: FxHashMap::default() }
    }

    fn add(&mut self, x: Mask, z: Mask, v: C64) {
        *self.map.entry((x, z)).or_insert(C64::new(0.0, 0.0)) += v;
    }

    fn finish(self) -> PauliSum {
        let mut terms: Vec<_> =
            self.map.into_iter().filter(|(_, v)| v.norm() >= DROP_TOL).map(|((x, z), v)| (x, z, v)).collect();
        terms.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        PauliSum { n: self.n, terms }
    }
}

/// `[s1, s2] = s1 s2 - s2 s1`. Only anticommuting pairs contribute, each as
/// `2 p q`.
pub fn commutator(s1: &PauliSum, s2: &PauliSum) -> Result<PauliSum> {
    s1.check_n(s2)?;
    let mut acc = Accumulator::new(s1.n);
    for &(x1, z1, a) in &s1.terms {
        for &(x2, z2, b) in &s2.terms {
            if anticommutes(x1, z1, x2, z2) {
                let k = product_phase(x1, z1, x2, z2);
                acc.add(x1 ^ x2, z1 ^ z2, 2.0 * a * b * i_pow(k));
            }
        }
    }
    Ok(acc.finish())
}

/// Right-nested commutator: `[O_{p+1}, ..., [O_2, O_1]]` for
/// `ops = [O_{p+1}, ..., O_2, O_1]`.
pub fn nested_commutator(ops: &[&PauliSum]) -> Result<PauliSum> {
    if ops.len() < 2 {
        return Err(Error::Input("nested commutator needs at least two operands".into()));
    }
    let last = ops.len() - 1;
    let mut acc = commutator(ops[last - 1], ops[last])?;
    for op in ops[..last - 1].iter().rev() {
        if acc.is_empty() {
            return Ok(PauliSum::zero(acc.n));
        }
        acc = commutator(op, &acc)?;
    }
    Ok(acc)
}

/// Dense `2^n` matrix of `s`, subject to the dense dimension cap.
pub fn to_dense(s: &PauliSum) -> Result<DenseOperator> {
    let n = s.n;
    crate::dense::check_cap(n)?;
    let dim = 1usize << n;
    let mut m = DenseOperator::zeros(dim);
    for t in s.terms() {
        let x = t.x.low() as usize;
        let z = t.z.low() as usize;
        let base = t.coeff * i_pow((t.x & t.z).count());
        for b in 0..dim {
            let v = if (z & b).count_ones() % 2 == 1 { -base } else { base };
            m.add_at(b ^ x, b, v);
        }
    }
    Ok(m)
}

/// Matrix element `<row| P |col>` of the bare string `(x, z)` (unit
/// coefficient) restricted to 64-bit basis labels.
pub fn string_entry(x: u64, z: u64, col: u64) -> (u64, C64) {
    let phase = i_pow((x & z).count_ones());
    let v = if (z & col).count_ones() % 2 == 1 { -phase } else { phase };
    (col ^ x, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn single(n: usize, coeff: f64, ops: &[(usize, char)]) -> PauliSum {
        PauliSum::from_term(PauliTerm::from_ops(n, coeff, ops))
    }

    /// Kronecker-product oracle independent of the bitmask formula.
    fn kron_oracle(letters: &str) -> DenseOperator {
        let mats = |ch: char| -> [[C64; 2]; 2] {
            let o = c(0.0, 0.0);
            let l = c(1.0, 0.0);
            match ch {
                'I' => [[l, o], [o, l]],
                'X' => [[o, l], [l, o]],
                'Y' => [[o, c(0.0, -1.0)], [c(0.0, 1.0), o]],
                _ => [[l, o], [o, -l]],
            }
        };
        let n = letters.len();
        let dim = 1 << n;
        let chars: Vec<char> = letters.chars().collect();
        let mut m = DenseOperator::zeros(dim);
        for r in 0..dim {
            for col in 0..dim {
                let mut v = c(1.0, 0.0);
                for (q, &ch) in chars.iter().enumerate() {
                    v *= mats(ch)[(r >> q) & 1][(col >> q) & 1];
                }
                m.add_at(r, col, v);
            }
        }
        m
    }

    #[test]
    fn dense_matches_kron_oracle() {
        for s in ["XYZ", "YYI", "IZX", "YXY"] {
            let t = parse_term(s).unwrap();
            let d = to_dense(&PauliSum::from_term(t)).unwrap();
            assert!(d.sub(&kron_oracle(s)).max_abs() < 1e-15, "{s}");
        }
    }

    #[test]
    fn multiply_examples() {
        let xi = PauliTerm::from_ops(2, 1.0, &[(0, 'X')]);
        let ii = PauliTerm::identity(2, 1.0);
        assert_eq!(multiply(&xi, &ii).unwrap(), xi);
        let x = PauliTerm::from_ops(1, 1.0, &[(0, 'X')]);
        let z = PauliTerm::from_ops(1, 1.0, &[(0, 'Z')]);
        let p = multiply(&x, &z).unwrap();
        assert_eq!(p.letters(), "Y");
        assert_eq!(p.coeff, c(0.0, -1.0));
        let x2 = PauliTerm::from_ops(1, 2.0, &[(0, 'X')]);
        let x3 = PauliTerm::from_ops(1, 3.0, &[(0, 'X')]);
        let p = multiply(&x2, &x3).unwrap();
        assert_eq!(p.letters(), "I");
        assert_eq!(p.coeff, c(6.0, 0.0));
        assert!(multiply(&x, &xi).is_err());
    }

    #[test]
    fn multiply_matches_dense_product() {
        let letters = ["I", "X", "Y", "Z"];
        for a in letters {
            for b in letters {
                for a2 in letters {
                    for b2 in letters {
                        let p = parse_term(&format!("{a}{a2}")).unwrap();
                        let q = parse_term(&format!("{b}{b2}")).unwrap();
                        let pq = PauliSum::from_term(multiply(&p, &q).unwrap());
                        let want = kron_oracle(&format!("{a}{a2}")).matmul(&kron_oracle(&format!("{b}{b2}")));
                        assert!(to_dense(&pq).unwrap().sub(&want).max_abs() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn commutator_examples() {
        let z1 = single(2, 1.0, &[(0, 'Z')]);
        let z2 = single(2, 1.0, &[(1, 'Z')]);
        assert!(commutator(&z1, &z2).unwrap().is_empty());

        // [X, Z] = -2i Y, checked against dense matrices.
        let x = single(1, 1.0, &[(0, 'X')]);
        let z = single(1, 1.0, &[(0, 'Z')]);
        let xz = commutator(&x, &z).unwrap();
        let dx = to_dense(&x).unwrap();
        let dz = to_dense(&z).unwrap();
        let oracle = dx.matmul(&dz).sub(&dz.matmul(&dx));
        assert!(to_dense(&xz).unwrap().sub(&oracle).max_abs() < 1e-15);
        assert_eq!(xz.len(), 1);
        let t = xz.terms().next().unwrap();
        assert_eq!((t.letters().as_str(), t.coeff), ("Y", c(0.0, -2.0)));

        // [X1X2, Z1] = -2i Y1X2.
        let xx = single(2, 1.0, &[(0, 'X'), (1, 'X')]);
        let r = commutator(&xx, &z1).unwrap();
        let oracle = kron_oracle("XX").matmul(&kron_oracle("ZI")).sub(&kron_oracle("ZI").matmul(&kron_oracle("XX")));
        assert!(to_dense(&r).unwrap().sub(&oracle).max_abs() < 1e-15);
        let t = r.terms().next().unwrap();
        assert_eq!((t.letters().as_str(), t.coeff), ("YX", c(0.0, -2.0)));
    }

    #[test]
    fn nested_commutator_examples() {
        let x = single(1, 1.0, &[(0, 'X')]);
        let z = single(1, 1.0, &[(0, 'Z')]);
        // [X,[X,Z]] = [X,-2iY] = -2i(2iZ) = 4 Z, checked densely.
        let r = nested_commutator(&[&x, &x, &z]).unwrap();
        let (dx, dz) = (to_dense(&x).unwrap(), to_dense(&z).unwrap());
        let oracle = dx.commutator(&dx.commutator(&dz));
        assert!(to_dense(&r).unwrap().sub(&oracle).max_abs() < 1e-15);
        assert_eq!(r, z.scale(c(4.0, 0.0)));
        // [Z,[Z,X]] = 4 X
        let r = nested_commutator(&[&z, &z, &x]).unwrap();
        assert_eq!(r, x.scale(c(4.0, 0.0)));
        assert!(nested_commutator(&[&z, &x, &x]).unwrap().is_empty());
        assert!(nested_commutator(&[&z]).is_err());
    }

    #[test]
    fn one_norm_and_support() {
        assert_eq!(PauliSum::zero(3).coefficient_one_norm(), 0.0);
        let s = single(1, 2.0, &[(0, 'X')]).add(&single(1, 3.0, &[(0, 'Z')])).unwrap();
        assert_eq!(s.coefficient_one_norm(), 5.0);
        let s = single(1, 1.0, &[(0, 'X')]).add(&single(1, 1.0, &[(0, 'Z')])).unwrap();
        assert_eq!(s.coefficient_one_norm(), 2.0);
        let ev = to_dense(&s).unwrap().eigvals_hermitian().unwrap();
        assert!((ev[0] - 2f64.sqrt()).abs() < 1e-14);

        assert!(PauliSum::zero(4).support().is_empty());
        let s = single(5, 1.0, &[(3, 'X'), (4, 'X')]).add(&single(5, 1.0, &[(3, 'Z')])).unwrap();
        assert_eq!(s.support().into_iter().collect::<Vec<_>>(), vec![3, 4]);
    }

    #[test]
    fn to_dense_examples() {
        let id = to_dense(&PauliSum::from_term(PauliTerm::identity(1, 1.0))).unwrap();
        assert!(id.sub(&DenseOperator::identity(2)).max_abs() == 0.0);
        let y = to_dense(&single(1, 1.0, &[(0, 'Y')])).unwrap();
        assert_eq!(y.get(0, 1), c(0.0, -1.0));
        assert_eq!(y.get(1, 0), c(0.0, 1.0));
        // X1 + Z2: eigenvalues from the dense solver are {2, 0, 0, -2}.
        let s = single(2, 1.0, &[(0, 'X')]).add(&single(2, 1.0, &[(1, 'Z')])).unwrap();
        let ev = to_dense(&s).unwrap().eigvals_hermitian().unwrap();
        let want = [2.0, 0.0, 0.0, -2.0];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn text_round_trip() {
        let t = parse_term("1.5*XIZY").unwrap();
        assert_eq!(t.n, 4);
        assert_eq!(t.letters(), "XIZY");
        assert_eq!(t.coeff, c(1.5, 0.0));
        assert!(parse_term("XQ").is_err());
    }

    #[test]
    fn masks_wider_than_64_bits() {
        let a = PauliTerm::from_ops(200, 1.0, &[(150, 'X'), (3, 'Z')]);
        let b = PauliTerm::from_ops(200, 1.0, &[(150, 'Z')]);
        let r = commutator(&PauliSum::from_term(a), &PauliSum::from_term(b)).unwrap();
        let t = r.terms().next().unwrap();
        assert_eq!(t.letter(150), 'Y');
        assert_eq!(t.letter(3), 'Z');
        assert_eq!(r.support().into_iter().collect::<Vec<_>>(), vec![3, 150]);
    }
}
