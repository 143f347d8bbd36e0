//! Dense n-qubit pure states and the primitive operations on them.
//!
//! Basis ordering: qubit 1 is the most significant bit, so the ket
//! `|b1 b2 ... bn>` lives at index `sum b_i * 2^(n-i)` and `|01> = |0> (x) |1>`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported register.
pub const MAX_QUBITS: usize = 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2x2 complex matrix in row-major order.
pub type Mat2 = [[Complex64; 2]; 2];

pub const IDENTITY2: Mat2 = [[ONE, ZERO], [ZERO, ONE]];

/// Dense amplitude vector over the computational basis of `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_capacity(n_qubits)?;
        if n_qubits == 0 {
            return Err(Error::Domain("a state needs at least one qubit".into()));
        }
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::Shape(format!(
                "{} amplitudes supplied for {} qubits (expected {})",
                amplitudes.len(),
                n_qubits,
                1usize << n_qubits
            )));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn zeros(n_qubits: usize) -> Result<Self> {
        check_capacity(n_qubits)?;
        Self::new(n_qubits, vec![ZERO; 1 << n_qubits])
    }

    /// The computational basis state named by a bitstring such as `"0110"`.
    pub fn basis(bits: &str) -> Result<Self> {
        let index = parse_bitstring(bits)?;
        let mut psi = Self::zeros(bits.len())?;
        psi.amplitudes[index] = ONE;
        Ok(psi)
    }

    /// Builds `scale * sum_k coeff_k |bits_k>`. Repeated bitstrings accumulate.
    pub fn from_terms(n_qubits: usize, terms: &[(&str, f64)], scale: f64) -> Result<Self> {
        let mut psi = Self::zeros(n_qubits)?;
        for &(bits, coeff) in terms {
            if bits.len() != n_qubits {
                return Err(Error::Shape(format!(
                    "bitstring `{bits}` does not have {n_qubits} qubits"
                )));
            }
            psi.amplitudes[parse_bitstring(bits)?] += Complex64::new(coeff * scale, 0.0);
        }
        Ok(psi)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// Amplitude of the basis state written as a bitstring.
    pub fn amplitude(&self, bits: &str) -> Result<Complex64> {
        if bits.len() != self.n_qubits {
            return Err(Error::Shape(format!(
                "bitstring `{bits}` does not have {} qubits",
                self.n_qubits
            )));
        }
        Ok(self.amplitudes[parse_bitstring(bits)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Returns the state rescaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &Self, factor: Complex64) -> Result<Self> {
        same_size(self, other)?;
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + factor * b)
                .collect(),
        })
    }

    /// Multiplies by the phase that makes the first nonzero amplitude (in
    /// bitstring order) real and positive. Amplitudes with magnitude below
    /// `chop` are first set to exactly zero.
    pub fn with_canonical_phase(&self, chop: f64) -> Self {
        let amplitudes: Vec<Complex64> = self
            .amplitudes
            .iter()
            .map(|&a| if a.norm() < chop { ZERO } else { a })
            .collect();
        let phase = amplitudes
            .iter()
            .find(|a| **a != ZERO)
            .map(|a| a.conj() / a.norm())
            .unwrap_or(ONE);
        Self {
            n_qubits: self.n_qubits,
            amplitudes: amplitudes.into_iter().map(|a| a * phase).collect(),
        }
    }

    /// Largest absolute amplitude difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        same_size(self, other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Nonzero terms as `(bitstring, amplitude)` pairs in bitstring order.
    pub fn terms(&self, threshold: f64) -> Vec<(String, Complex64)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > threshold)
            .map(|(k, a)| (bitstring(k, self.n_qubits), *a))
            .collect()
    }

    /// Applies a 2x2 matrix to qubit `qubit` (0-based from the left).
    pub(crate) fn apply_single_in_place(&mut self, qubit: usize, m: &Mat2) {
        let stride = 1usize << (self.n_qubits - 1 - qubit);
        for base in 0..self.amplitudes.len() {
            if base & stride != 0 {
                continue;
            }
            let a0 = self.amplitudes[base];
            let a1 = self.amplitudes[base | stride];
            self.amplitudes[base] = m[0][0] * a0 + m[0][1] * a1;
            self.amplitudes[base | stride] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms(1e-12);
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (bits, a)) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)|{bits}>", a.re, a.im)?;
        }
        Ok(())
    }
}

fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::Capacity {
            requested: n,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

fn same_size(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::Shape(format!(
            "{}-qubit state vs {}-qubit state",
            a.n_qubits, b.n_qubits
        )));
    }
    Ok(())
}

pub(crate) fn parse_bitstring(bits: &str) -> Result<usize> {
    if bits.is_empty() || bits.len() > MAX_QUBITS {
        return Err(Error::Domain(format!("bad bitstring length in `{bits}`")));
    }
    bits.bytes().try_fold(0usize, |acc, b| match b {
        b'0' => Ok(acc << 1),
        b'1' => Ok((acc << 1) | 1),
        _ => Err(Error::Domain(format!("`{bits}` is not a bitstring"))),
    })
}

/// Renders a basis index as an `n`-character bitstring, qubit 1 first.
pub fn bitstring(index: usize, n: usize) -> String {
    (0..n)
        .map(|q| if index >> (n - 1 - q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// `a (x) b`.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let n = a.n_qubits + b.n_qubits;
    check_capacity(n)?;
    let amplitudes = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    StateVector::new(n, amplitudes)
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    same_size(a, b)?;
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// `|<a|b>|`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    inner(a, b).map(|z| z.norm())
}

/// A bijection on qubit positions. `mapping[i]` is the (0-based) position
/// that qubit `i` is moved to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QubitPermutation {
    mapping: Vec<usize>,
}

impl QubitPermutation {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            mapping: (0..n_qubits).collect(),
        }
    }

    /// From a 1-based destination list, e.g. `[2, 1, 3]` swaps qubits 1 and 2.
    pub fn from_one_based(mapping: &[usize]) -> Result<Self> {
        let zero_based = mapping
            .iter()
            .map(|&m| {
                m.checked_sub(1)
                    .ok_or_else(|| Error::InvalidPermutation("positions are 1-based".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_zero_based(zero_based)
    }

    pub fn from_zero_based(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        check_capacity(n)?;
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{mapping:?} is not a bijection on {n} positions"
                )));
            }
        }
        Ok(Self { mapping })
    }

    /// `P_ij`: exchanges qubits `i` and `j` (1-based).
    pub fn transposition(n_qubits: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n_qubits || j > n_qubits {
            return Err(Error::InvalidPermutation(format!(
                "P_{i}{j} out of range for {n_qubits} qubits"
            )));
        }
        let mut mapping: Vec<usize> = (0..n_qubits).collect();
        mapping.swap(i - 1, j - 1);
        Self::from_zero_based(mapping)
    }

    /// Product of transpositions written left to right, e.g. `[(2,4), (1,3)]`
    /// for `P_24 P_13` (so `P_13` acts first).
    pub fn product_of_transpositions(n_qubits: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        pairs.iter().try_fold(Self::identity(n_qubits), |acc, &(i, j)| {
            acc.compose(&Self::transposition(n_qubits, i, j)?)
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.mapping.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::Shape(format!(
                "composing permutations on {} and {} qubits",
                self.n_qubits(),
                other.n_qubits()
            )));
        }
        Ok(Self {
            mapping: other.mapping.iter().map(|&m| self.mapping[m]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.mapping.len()];
        for (i, &m) in self.mapping.iter().enumerate() {
            inv[m] = i;
        }
        Self { mapping: inv }
    }

    /// Where basis index `index` goes under the relabeling.
    pub fn permute_index(&self, index: usize) -> usize {
        let n = self.mapping.len();
        self.mapping
            .iter()
            .enumerate()
            .fold(0, |acc, (src, &dst)| {
                acc | ((index >> (n - 1 - src)) & 1) << (n - 1 - dst)
            })
    }

    /// Moves the per-qubit items of a sequence the same way as the qubits.
    pub fn permute_items<T: Clone>(&self, items: &[T]) -> Result<Vec<T>> {
        if items.len() != self.mapping.len() {
            return Err(Error::Shape(format!(
                "{} items for a {}-qubit permutation",
                items.len(),
                self.mapping.len()
            )));
        }
        let mut out = items.to_vec();
        for (src, &dst) in self.mapping.iter().enumerate() {
            out[dst] = items[src].clone();
        }
        Ok(out)
    }
}

/// Relabels qubits: the amplitude of `|b>` moves to the bitstring in which
/// bit `i` of `b` sits at position `p(i)`.
pub fn permute(p: &QubitPermutation, psi: &StateVector) -> Result<StateVector> {
    if p.n_qubits() != psi.n_qubits {
        return Err(Error::Shape(format!(
            "{}-qubit permutation applied to a {}-qubit state",
            p.n_qubits(),
            psi.n_qubits
        )));
    }
    let mut amplitudes = vec![ZERO; psi.dim()];
    for (k, a) in psi.amplitudes.iter().enumerate() {
        amplitudes[p.permute_index(k)] = *a;
    }
    StateVector::new(psi.n_qubits, amplitudes)
}

/// One 2x2 special-unitary matrix, applied as `U^{⊗n}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollectiveUnitary {
    u: Mat2,
}

impl CollectiveUnitary {
    /// Unitarity tolerance on `‖u†u − I‖`.
    pub const TOLERANCE: f64 = 1e-12;

    /// Validates unitarity and divides out a global phase so that `det u = 1`.
    pub fn new(u: Mat2) -> Result<Self> {
        let residual = unitarity_residual(&u);
        if !(residual <= Self::TOLERANCE) {
            return Err(Error::NotUnitary { residual });
        }
        let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
        let scale = det.sqrt().inv();
        Ok(Self {
            u: u.map(|row| row.map(|x| x * scale)),
        })
    }

    /// Wraps a matrix already known to be in SU(2).
    pub(crate) fn from_su2_unchecked(u: Mat2) -> Self {
        Self { u }
    }

    pub fn identity() -> Self {
        Self { u: IDENTITY2 }
    }

    /// `exp(-i θ/2 n·σ)` about the axis `(nx, ny, nz)`.
    pub fn rotation(axis: [f64; 3], theta: f64) -> Result<Self> {
        let len = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len == 0.0 || !len.is_finite() {
            return Err(Error::Domain("rotation axis must be a nonzero vector".into()));
        }
        let [nx, ny, nz] = axis.map(|x| x / len);
        let (s, c) = (theta / 2.0).sin_cos();
        let i = Complex64::i();
        let u = [
            [Complex64::new(c, 0.0) - i * s * nz, -i * s * Complex64::new(nx, -ny)],
            [-i * s * Complex64::new(nx, ny), Complex64::new(c, 0.0) + i * s * nz],
        ];
        Self::new(u)
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.u
    }

    pub fn det(&self) -> Complex64 {
        self.u[0][0] * self.u[1][1] - self.u[0][1] * self.u[1][0]
    }

    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.u)
    }
}

/// Frobenius norm of `u†u − I`.
pub fn unitarity_residual(u: &Mat2) -> f64 {
    let mut acc = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            let entry = u[0][r].conj() * u[0][c] + u[1][r].conj() * u[1][c];
            let target = if r == c { ONE } else { ZERO };
            acc += (entry - target).norm_sqr();
        }
    }
    acc.sqrt()
}

/// `U^{⊗n} |ψ>`.
pub fn apply_collective(u: &CollectiveUnitary, psi: &StateVector) -> StateVector {
    let mut out = psi.clone();
    for q in 0..psi.n_qubits {
        out.apply_single_in_place(q, &u.u);
    }
    out
}

/// `(u_1 ⊗ u_2 ⊗ ... ⊗ u_n) |ψ>`.
pub fn apply_independent(us: &[CollectiveUnitary], psi: &StateVector) -> Result<StateVector> {
    if us.len() != psi.n_qubits {
        return Err(Error::Shape(format!(
            "{} unitaries for {} qubits",
            us.len(),
            psi.n_qubits
        )));
    }
    let mut out = psi.clone();
    for (q, u) in us.iter().enumerate() {
        out.apply_single_in_place(q, &u.u);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn singlet() -> StateVector {
        StateVector::from_terms(2, &[("01", 1.0), ("10", -1.0)], FRAC_1_SQRT_2).unwrap()
    }

    #[test]
    fn tensor_of_basis_states() {
        let psi = tensor(&StateVector::basis("0").unwrap(), &StateVector::basis("1").unwrap())
            .unwrap();
        assert_eq!(psi.n_qubits(), 2);
        assert_eq!(psi.amplitudes()[1], ONE);
        assert_eq!(psi.norm_sqr(), 1.0);
    }

    #[test]
    fn triple_singlet_has_eight_terms() {
        let s = singlet();
        let psi = tensor(&tensor(&s, &s).unwrap(), &s).unwrap();
        let terms = psi.terms(1e-15);
        assert_eq!(terms.len(), 8);
        let expected = 1.0 / (2.0 * 2f64.sqrt());
        for (bits, a) in &terms {
            assert!((a.norm() - expected).abs() < 1e-15, "{bits}");
        }
        // 010101: +1 from each singlet
        assert!((psi.amplitude("010101").unwrap().re - expected).abs() < 1e-15);
        assert!((psi.amplitude("100101").unwrap().re + expected).abs() < 1e-15);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_capacity() {
        let a = StateVector::zeros(6).unwrap();
        let b = StateVector::zeros(5).unwrap();
        assert!(matches!(tensor(&a, &b), Err(Error::Capacity { requested: 11, .. })));
        assert!(StateVector::zeros(11).is_err());
    }

    #[test]
    fn inner_shape_mismatch() {
        let a = StateVector::basis("0").unwrap();
        let b = StateVector::basis("01").unwrap();
        assert!(matches!(inner(&a, &b), Err(Error::Shape(_))));
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let a = StateVector::basis("1").unwrap().scaled(Complex64::i());
        let b = StateVector::basis("1").unwrap();
        assert_eq!(inner(&a, &b).unwrap(), -Complex64::i());
        assert!((inner(&singlet(), &singlet()).unwrap() - ONE).norm() < 1e-15);
    }

    #[test]
    fn transposition_swaps_bits() {
        let p = QubitPermutation::transposition(3, 1, 3).unwrap();
        let psi = permute(&p, &StateVector::basis("100").unwrap()).unwrap();
        assert_eq!(psi, StateVector::basis("001").unwrap());
    }

    #[test]
    fn mapping_semantics_for_a_cycle() {
        // qubit 1 -> position 2, qubit 2 -> 3, qubit 3 -> 1
        let p = QubitPermutation::from_one_based(&[2, 3, 1]).unwrap();
        let psi = permute(&p, &StateVector::basis("100").unwrap()).unwrap();
        assert_eq!(psi, StateVector::basis("010").unwrap());
        assert_eq!(p.permute_items(&['a', 'b', 'c']).unwrap(), vec!['c', 'a', 'b']);
    }

    #[test]
    fn identity_permutation_leaves_state() {
        let s = singlet();
        assert_eq!(permute(&QubitPermutation::identity(2), &s).unwrap(), s);
    }

    #[test]
    fn invalid_permutations() {
        assert!(QubitPermutation::from_one_based(&[1, 1]).is_err());
        assert!(QubitPermutation::from_one_based(&[0, 1]).is_err());
        assert!(QubitPermutation::transposition(4, 1, 5).is_err());
        let p = QubitPermutation::identity(3);
        assert!(matches!(permute(&p, &singlet()), Err(Error::Shape(_))));
    }

    #[test]
    fn product_of_transpositions_order() {
        // P_12 P_23 sends qubit 3 -> 2 -> 1.
        let p = QubitPermutation::product_of_transpositions(3, &[(1, 2), (2, 3)]).unwrap();
        let psi = permute(&p, &StateVector::basis("001").unwrap()).unwrap();
        assert_eq!(psi, StateVector::basis("100").unwrap());
    }

    #[test]
    fn collective_identity_and_z_rotation() {
        let s = singlet();
        assert_eq!(apply_collective(&CollectiveUnitary::identity(), &s), s);

        let theta = 0.7;
        let u = CollectiveUnitary::rotation([0.0, 0.0, 1.0], theta).unwrap();
        let zz = StateVector::basis("00").unwrap();
        let out = apply_collective(&u, &zz);
        assert!((fidelity(&zz, &out).unwrap() - 1.0).abs() < 1e-12);
        let expected = Complex64::from_polar(1.0, -theta);
        assert!((out.amplitudes()[0] - expected).norm() < 1e-12);
    }

    #[test]
    fn constructor_removes_determinant_phase() {
        let phase = Complex64::from_polar(1.0, 0.3);
        let u = [[phase, ZERO], [ZERO, phase]];
        let cu = CollectiveUnitary::new(u).unwrap();
        assert!((cu.det() - ONE).norm() < 1e-12);
        assert!(cu.unitarity_residual() < 1e-12);
    }

    #[test]
    fn non_unitary_rejected() {
        let u = [[ONE, ONE], [ZERO, ONE]];
        assert!(matches!(CollectiveUnitary::new(u), Err(Error::NotUnitary { .. })));
        let nan = [[Complex64::new(f64::NAN, 0.0), ZERO], [ZERO, ONE]];
        assert!(CollectiveUnitary::new(nan).is_err());
    }

    #[test]
    fn independent_matches_collective_when_equal() {
        let u = CollectiveUnitary::rotation([1.0, 2.0, -0.5], 1.1).unwrap();
        let psi = StateVector::from_terms(3, &[("001", 0.6), ("110", 0.8)], 1.0).unwrap();
        let a = apply_collective(&u, &psi);
        let b = apply_independent(&[u; 3], &psi).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-15);
        let id = apply_independent(&[CollectiveUnitary::identity(); 3], &psi).unwrap();
        assert_eq!(id, psi);
        assert!(matches!(apply_independent(&[u; 2], &psi), Err(Error::Shape(_))));
    }

    #[test]
    fn canonical_phase_makes_first_amplitude_positive() {
        let s = singlet().scaled(Complex64::from_polar(1.0, 2.0));
        let c = s.with_canonical_phase(1e-14);
        assert!(c.max_abs_diff(&singlet()).unwrap() < 1e-15);
    }

    #[test]
    fn bitstring_rendering() {
        assert_eq!(bitstring(5, 4), "0101");
        assert_eq!(parse_bitstring("0101").unwrap(), 5);
        assert!(parse_bitstring("012").is_err());
    }
}
