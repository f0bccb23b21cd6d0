//! Bosonic mode registers, truncated Fock bases and sparse pure states.
//!
//! A [`ModeRegister`] is an ordered list of labelled optical modes together
//! with a total-photon truncation bound `L`. Its Fock basis is the set of
//! occupation tuples whose entries sum to at most `L`, enumerated in
//! lexicographic order (first mode most significant). [`PureState`] stores a
//! normalized sparse amplitude map over that basis; un-normalized
//! intermediates live in [`StateBuilder`] until validated.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `|‖ψ‖² − 1|` for states accepted as normalized.
pub const EPS_NORM: f64 = 1e-9;
/// Tolerance on residual overlaps between orthonormal basis vectors.
pub const EPS_ORTH: f64 = 1e-9;
/// Amplitudes below this magnitude are pruned from sparse maps.
pub const EPS_AMP: f64 = 1e-12;
/// Residual-norm threshold under which a vector counts as linearly dependent.
pub const RANK_TOL: f64 = 1e-7;

/// Physical character of a mode label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModeKind {
    TimeBin,
    Polarization,
    Arm,
    Tag,
    EveInternal,
}

/// A distinguishable optical mode: kind, time-bin index and channel id.
///
/// The triple must be unique within a register. Eve-internal modes are
/// bookkeeping labels for an eavesdropper's probe and never appear in a
/// monitored set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    pub kind: ModeKind,
    pub time_index: i32,
    pub channel: String,
}

impl ModeLabel {
    pub fn new(kind: ModeKind, channel: &str, time_index: i32) -> Self {
        Self {
            kind,
            time_index,
            channel: channel.to_string(),
        }
    }

    pub fn shifted(&self, bins: i32) -> Self {
        Self {
            kind: self.kind,
            time_index: self.time_index + bins,
            channel: self.channel.clone(),
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.channel, self.time_index)
    }
}

/// Ordered set of modes plus a total-photon truncation bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeRegister {
    modes: Vec<ModeLabel>,
    max_photons: u32,
}

impl ModeRegister {
    pub fn new(modes: Vec<ModeLabel>, max_photons: u32) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for m in &modes {
            if !seen.insert(m.clone()) {
                return Err(Error::DuplicateMode(m.to_string()));
            }
        }
        Ok(Self { modes, max_photons })
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn max_photons(&self) -> u32 {
        self.max_photons
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn index_of(&self, label: &ModeLabel) -> Option<usize> {
        self.modes.iter().position(|m| m == label)
    }

    pub fn mode_set(&self) -> BTreeSet<ModeLabel> {
        self.modes.iter().cloned().collect()
    }

    pub fn contains(&self, label: &ModeLabel) -> bool {
        self.modes.iter().any(|m| m == label)
    }

    /// Number of Fock basis states: occupation tuples with total ≤ `L`.
    pub fn dimension(&self) -> usize {
        // C(m + L, m) for m modes and cutoff L.
        let m = self.modes.len() as u64;
        let l = self.max_photons as u64;
        let mut acc: u64 = 1;
        for k in 1..=m {
            acc = acc * (l + k) / k;
        }
        acc as usize
    }

    /// All occupation tuples with total photons ≤ `max_photons`, in
    /// lexicographic order (first mode most significant). The enumeration is
    /// deterministic and stable across runs.
    pub fn enumerate_basis(&self) -> Vec<FockBasisState> {
        let mut out = Vec::with_capacity(self.dimension());
        let mut occ = vec![0u32; self.modes.len()];
        Self::enumerate_rec(&mut occ, 0, self.max_photons, &mut out);
        out
    }

    fn enumerate_rec(occ: &mut Vec<u32>, pos: usize, budget: u32, out: &mut Vec<FockBasisState>) {
        if pos == occ.len() {
            out.push(FockBasisState {
                occupations: occ.clone(),
            });
            return;
        }
        for n in 0..=budget {
            occ[pos] = n;
            Self::enumerate_rec(occ, pos + 1, budget - n, out);
        }
        occ[pos] = 0;
    }

    /// Tensor of two registers with disjoint mode sets; truncation bounds add.
    pub fn tensor(&self, other: &ModeRegister) -> Result<ModeRegister> {
        self.tensor_with_cap(other, self.max_photons + other.max_photons)
    }

    /// Tensor with an explicit combined truncation bound.
    pub fn tensor_with_cap(&self, other: &ModeRegister, cap: u32) -> Result<ModeRegister> {
        let own = self.mode_set();
        if let Some(m) = other.modes.iter().find(|m| own.contains(m)) {
            return Err(Error::OverlappingModes(m.to_string()));
        }
        let mut modes = self.modes.clone();
        modes.extend(other.modes.iter().cloned());
        ModeRegister::new(modes, cap)
    }

    /// Sub-register of the given modes, preserving this register's order and
    /// truncation bound.
    pub fn subregister(&self, kept: &BTreeSet<ModeLabel>) -> Result<ModeRegister> {
        for k in kept {
            if !self.contains(k) {
                return Err(Error::UnknownMode(k.to_string()));
            }
        }
        let modes: Vec<ModeLabel> = self
            .modes
            .iter()
            .filter(|m| kept.contains(*m))
            .cloned()
            .collect();
        ModeRegister::new(modes, self.max_photons)
    }

    /// Same register with a different truncation bound.
    pub fn with_max_photons(&self, max_photons: u32) -> ModeRegister {
        ModeRegister {
            modes: self.modes.clone(),
            max_photons,
        }
    }
}

impl fmt::Display for ModeRegister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.modes.iter().map(|m| m.to_string()).collect();
        write!(f, "[{}; L={}]", names.join(", "), self.max_photons)
    }
}

/// Occupation-number tuple over the modes of an owning register.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockBasisState {
    occupations: Vec<u32>,
}

impl FockBasisState {
    pub fn new(occupations: Vec<u32>) -> Self {
        Self { occupations }
    }

    pub fn occupations(&self) -> &[u32] {
        &self.occupations
    }

    pub fn total_photons(&self) -> u32 {
        self.occupations.iter().sum()
    }
}

impl fmt::Display for FockBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.occupations.iter().enumerate() {
            if i > 0 && self.occupations.len() > 10 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Accumulator for un-normalized amplitude maps.
///
/// This is the only mutable form a state takes; [`StateBuilder::build`]
/// validates normalization and hands out an immutable [`PureState`].
#[derive(Debug, Clone)]
pub struct StateBuilder {
    register: ModeRegister,
    amplitudes: BTreeMap<Vec<u32>, Complex64>,
}

impl StateBuilder {
    pub fn new(register: ModeRegister) -> Self {
        Self {
            register,
            amplitudes: BTreeMap::new(),
        }
    }

    pub fn register(&self) -> &ModeRegister {
        &self.register
    }

    /// Adds `amp` to the coefficient of the given occupation tuple.
    pub fn add(&mut self, occupations: &[u32], amp: Complex64) -> Result<&mut Self> {
        if occupations.len() != self.register.len() {
            return Err(Error::OccupationLength {
                got: occupations.len(),
                want: self.register.len(),
            });
        }
        let total: u32 = occupations.iter().sum();
        if total > self.register.max_photons() {
            return Err(Error::TruncationExceeded {
                total,
                bound: self.register.max_photons(),
            });
        }
        *self
            .amplitudes
            .entry(occupations.to_vec())
            .or_insert(Complex64::new(0.0, 0.0)) += amp;
        Ok(self)
    }

    /// Adds a scaled copy of another state's amplitudes (same register).
    pub fn add_state(&mut self, state: &PureState, scale: Complex64) -> Result<&mut Self> {
        if state.register != self.register {
            return Err(Error::RegisterMismatch(
                "cannot accumulate states over different registers".into(),
            ));
        }
        for (occ, amp) in &state.amplitudes {
            self.add(occ, amp * scale)?;
        }
        Ok(self)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|c| c.norm_sqr()).sum()
    }

    fn prune(&mut self) {
        self.amplitudes.retain(|_, c| c.norm() >= EPS_AMP);
    }

    /// Validates that the accumulated map is normalized and freezes it.
    pub fn build(mut self) -> Result<PureState> {
        self.prune();
        let norm = self.norm_sqr().sqrt();
        if (norm - 1.0).abs() > EPS_NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(PureState {
            register: self.register,
            amplitudes: self.amplitudes,
        })
    }

    /// Rescales to unit norm and freezes. Errors on the zero map.
    pub fn build_normalized(mut self) -> Result<PureState> {
        self.prune();
        let norm = self.norm_sqr().sqrt();
        if norm < EPS_AMP {
            return Err(Error::ZeroState);
        }
        let inv = Complex64::new(1.0 / norm, 0.0);
        for c in self.amplitudes.values_mut() {
            *c *= inv;
        }
        self.prune();
        Ok(PureState {
            register: self.register,
            amplitudes: self.amplitudes,
        })
    }

    /// Freezes without any norm requirement. Used for intermediate vectors
    /// (e.g. un-normalized trace components) that are orthonormalized later.
    pub fn build_unchecked(mut self) -> PureState {
        self.prune();
        PureState {
            register: self.register,
            amplitudes: self.amplitudes,
        }
    }
}

/// Normalized sparse state over a register's Fock basis. Immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    register: ModeRegister,
    amplitudes: BTreeMap<Vec<u32>, Complex64>,
}

impl PureState {
    /// The basis state with the given occupations (amplitude 1).
    pub fn basis_state(register: &ModeRegister, occupations: &[u32]) -> Result<PureState> {
        let mut b = StateBuilder::new(register.clone());
        b.add(occupations, Complex64::new(1.0, 0.0))?;
        b.build()
    }

    /// The vacuum of a register.
    pub fn vacuum(register: &ModeRegister) -> PureState {
        let occ = vec![0u32; register.len()];
        Self::basis_state(register, &occ).expect("vacuum is always valid")
    }

    /// A single photon in `mode`, all other modes empty.
    pub fn single_photon(register: &ModeRegister, mode: &ModeLabel) -> Result<PureState> {
        let idx = register
            .index_of(mode)
            .ok_or_else(|| Error::UnknownMode(mode.to_string()))?;
        let mut occ = vec![0u32; register.len()];
        occ[idx] = 1;
        Self::basis_state(register, &occ)
    }

    pub fn register(&self) -> &ModeRegister {
        &self.register
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn amplitude(&self, occupations: &[u32]) -> Complex64 {
        self.amplitudes
            .get(occupations)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn term_count(&self) -> usize {
        self.amplitudes.len()
    }

    /// ⟨self|other⟩ over the shared register (conjugate-linear in `self`).
    pub fn inner_product(&self, other: &PureState) -> Result<Complex64> {
        if self.register != other.register {
            return Err(Error::RegisterMismatch(
                "inner product requires identical registers".into(),
            ));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        if self.amplitudes.len() <= other.amplitudes.len() {
            for (occ, a) in &self.amplitudes {
                if let Some(b) = other.amplitudes.get(occ) {
                    acc += a.conj() * b;
                }
            }
        } else {
            for (occ, b) in &other.amplitudes {
                if let Some(a) = self.amplitudes.get(occ) {
                    acc += a.conj() * b;
                }
            }
        }
        Ok(acc)
    }

    /// Tensor product; mode sets must be disjoint. Occupation tuples
    /// concatenate in register order and amplitudes multiply.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let register = self.register.tensor(&other.register)?;
        let mut b = StateBuilder::new(register);
        for (occ_a, amp_a) in &self.amplitudes {
            for (occ_b, amp_b) in &other.amplitudes {
                let mut occ = occ_a.clone();
                occ.extend_from_slice(occ_b);
                b.add(&occ, amp_a * amp_b)?;
            }
        }
        b.build()
    }

    /// Embeds this state into a superset register: the extra modes are
    /// vacuum, and amplitudes are re-indexed to the target mode order.
    pub fn embed(&self, target: &ModeRegister) -> Result<PureState> {
        let mut map = Vec::with_capacity(self.register.len());
        for m in self.register.modes() {
            let idx = target
                .index_of(m)
                .ok_or_else(|| Error::UnknownMode(m.to_string()))?;
            map.push(idx);
        }
        let mut b = StateBuilder::new(target.clone());
        for (occ, amp) in &self.amplitudes {
            let mut new_occ = vec![0u32; target.len()];
            for (i, &n) in occ.iter().enumerate() {
                new_occ[map[i]] = n;
            }
            b.add(&new_occ, *amp)?;
        }
        b.build()
    }

    /// Component of this state with the given total photon number,
    /// renormalized. `None` if that sector is empty.
    pub fn photon_number_component(&self, n: u32) -> Option<PureState> {
        let mut b = StateBuilder::new(self.register.clone());
        let mut any = false;
        for (occ, amp) in &self.amplitudes {
            if occ.iter().sum::<u32>() == n {
                b.add(occ, *amp).expect("component of a valid state");
                any = true;
            }
        }
        if !any {
            return None;
        }
        b.build_normalized().ok()
    }

    /// Probability weight of the total-photon-number sector `n`.
    pub fn photon_number_weight(&self, n: u32) -> f64 {
        self.amplitudes
            .iter()
            .filter(|(occ, _)| occ.iter().sum::<u32>() == n)
            .map(|(_, amp)| amp.norm_sqr())
            .sum()
    }

    /// Physical equality: true when the states agree after aligning global
    /// phase on the largest-magnitude amplitude.
    pub fn equals_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        if self.register != other.register {
            return false;
        }
        let phase = match (self.leading_amplitude(), other.leading_amplitude()) {
            (Some((occ_a, a)), Some((_, _))) => {
                let b = other.amplitude(occ_a);
                if b.norm() < EPS_AMP {
                    return false;
                }
                (a / b) / (a / b).norm()
            }
            (None, None) => return true,
            _ => return false,
        };
        let keys: BTreeSet<&Vec<u32>> = self
            .amplitudes
            .keys()
            .chain(other.amplitudes.keys())
            .collect();
        keys.into_iter()
            .all(|occ| (self.amplitude(occ) - phase * other.amplitude(occ)).norm() <= tol)
    }

    fn leading_amplitude(&self) -> Option<(&Vec<u32>, Complex64)> {
        self.amplitudes
            .iter()
            .max_by(|(ka, a), (kb, b)| {
                a.norm()
                    .partial_cmp(&b.norm())
                    .unwrap()
                    .then_with(|| ka.cmp(kb))
            })
            .map(|(k, v)| (k, *v))
    }

    /// Dense coefficient vector in the register's canonical basis order.
    pub fn dense(&self) -> Vec<Complex64> {
        let basis = self.register.enumerate_basis();
        let index: BTreeMap<&[u32], usize> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.occupations(), i))
            .collect();
        let mut v = vec![Complex64::new(0.0, 0.0); basis.len()];
        for (occ, amp) in &self.amplitudes {
            v[index[occ.as_slice()]] = *amp;
        }
        v
    }
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.amplitudes.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (occ, amp) in &self.amplitudes {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(
                f,
                "({:+.6}{:+.6}i)·{}",
                amp.re,
                amp.im,
                FockBasisState::new(occ.clone())
            )?;
        }
        Ok(())
    }
}

/// Span of mutually orthonormal states over one register.
#[derive(Debug, Clone)]
pub struct Subspace {
    register: ModeRegister,
    basis: Vec<PureState>,
}

impl Subspace {
    /// Wraps an already-orthonormal basis, verifying pairwise overlaps.
    pub fn from_orthonormal_basis(register: ModeRegister, basis: Vec<PureState>) -> Result<Self> {
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let ip = a.inner_product(b)?;
                let target = if i == j { 1.0 } else { 0.0 };
                if (ip.norm() - target).abs() > EPS_ORTH {
                    return Err(Error::RegisterMismatch(format!(
                        "vectors {i},{j} are not orthonormal (|⟨i|j⟩| = {})",
                        ip.norm()
                    )));
                }
            }
        }
        Ok(Self { register, basis })
    }

    pub fn empty(register: ModeRegister) -> Self {
        Self {
            register,
            basis: Vec::new(),
        }
    }

    pub fn register(&self) -> &ModeRegister {
        &self.register
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[PureState] {
        &self.basis
    }

    /// Squared norm of the component of `state` lying outside this subspace.
    pub fn residual_sqr(&self, state: &PureState) -> Result<f64> {
        let mut total = state.norm().powi(2);
        for b in &self.basis {
            let c = b.inner_product(state)?;
            total -= c.norm_sqr();
        }
        Ok(total.max(0.0))
    }

    /// True when `state` lies in the span within `tol` (residual norm).
    pub fn contains(&self, state: &PureState, tol: f64) -> Result<bool> {
        Ok(self.residual_sqr(state)?.sqrt() <= tol)
    }

    /// Expansion coefficients of `state` in this basis.
    pub fn coefficients(&self, state: &PureState) -> Result<Vec<Complex64>> {
        self.basis.iter().map(|b| b.inner_product(state)).collect()
    }
}

/// Gram–Schmidt with a re-orthogonalization pass. Vectors whose residual
/// norm falls below `tol` are discarded, so the output length equals the
/// numerical rank of the input set. Inputs need not be normalized.
pub(crate) fn orthonormal_span(states: &[PureState], tol: f64) -> Result<Vec<PureState>> {
    let mut basis: Vec<PureState> = Vec::new();
    for s in states {
        if let Some(first) = basis.first() {
            if first.register() != s.register() {
                return Err(Error::RegisterMismatch(
                    "span over mixed registers".into(),
                ));
            }
        }
        let mut v = StateBuilder::new(s.register().clone());
        v.add_state(s, Complex64::new(1.0, 0.0))?;
        // two projection passes keep the residual orthogonal in ill-conditioned sets
        for _ in 0..2 {
            let current = v.clone().build_unchecked();
            for b in &basis {
                let c = b.inner_product(&current)?;
                v.add_state(b, -c)?;
            }
        }
        let candidate = v.build_unchecked();
        if candidate.norm() > tol {
            let mut n = StateBuilder::new(candidate.register().clone());
            n.add_state(&candidate, Complex64::new(1.0, 0.0))?;
            basis.push(n.build_normalized()?);
        }
    }
    Ok(basis)
}

/// Support of the reduced state on `kept_modes` after discarding the rest.
///
/// Decomposes `|Ψ⟩ = Σ_b |v_b⟩_kept ⊗ |b⟩_discarded` over the discarded
/// Fock basis and returns the orthonormalized span of the nonzero `|v_b⟩`.
/// For a pure input this equals the support of the reduced density operator
/// with no eigendecomposition required.
pub fn traced_support(state: &PureState, kept_modes: &BTreeSet<ModeLabel>) -> Result<Subspace> {
    if kept_modes.is_empty() {
        return Err(Error::EmptyKeptSet);
    }
    let register = state.register();
    let kept_register = register.subregister(kept_modes)?;
    let kept_idx: Vec<usize> = register
        .modes()
        .iter()
        .enumerate()
        .filter(|(_, m)| kept_modes.contains(*m))
        .map(|(i, _)| i)
        .collect();
    let disc_idx: Vec<usize> = register
        .modes()
        .iter()
        .enumerate()
        .filter(|(_, m)| !kept_modes.contains(*m))
        .map(|(i, _)| i)
        .collect();

    let mut components: BTreeMap<Vec<u32>, StateBuilder> = BTreeMap::new();
    for (occ, amp) in state.iter() {
        let kept_occ: Vec<u32> = kept_idx.iter().map(|&i| occ[i]).collect();
        let disc_occ: Vec<u32> = disc_idx.iter().map(|&i| occ[i]).collect();
        components
            .entry(disc_occ)
            .or_insert_with(|| StateBuilder::new(kept_register.clone()))
            .add(&kept_occ, *amp)?;
    }
    let vectors: Vec<PureState> = components
        .into_values()
        .map(|b| b.build_unchecked())
        .filter(|v| v.norm() > EPS_AMP)
        .collect();
    let basis = orthonormal_span(&vectors, RANK_TOL)?;
    Subspace::from_orthonormal_basis(kept_register, basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_modes(l: u32) -> ModeRegister {
        ModeRegister::new(
            vec![
                ModeLabel::new(ModeKind::Polarization, "H", 0),
                ModeLabel::new(ModeKind::Polarization, "V", 0),
            ],
            l,
        )
        .unwrap()
    }

    #[test]
    fn enumeration_two_modes_single_photon() {
        let reg = two_modes(1);
        let basis = reg.enumerate_basis();
        let occs: Vec<&[u32]> = basis.iter().map(|b| b.occupations()).collect();
        assert_eq!(occs, vec![&[0, 0][..], &[0, 1][..], &[1, 0][..]]);
        assert_eq!(reg.dimension(), 3);
    }

    #[test]
    fn enumeration_matches_two_photon_hexit() {
        let reg = two_modes(2);
        let basis = reg.enumerate_basis();
        assert_eq!(basis.len(), 6);
        assert_eq!(reg.dimension(), 6);
        let expect: BTreeSet<Vec<u32>> = [
            vec![0, 0],
            vec![1, 0],
            vec![0, 1],
            vec![1, 1],
            vec![2, 0],
            vec![0, 2],
        ]
        .into_iter()
        .collect();
        let got: BTreeSet<Vec<u32>> = basis.iter().map(|b| b.occupations().to_vec()).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn enumeration_four_modes_single_photon() {
        let reg = ModeRegister::new(
            (0..4)
                .map(|t| ModeLabel::new(ModeKind::Arm, "a", t))
                .collect(),
            1,
        )
        .unwrap();
        assert_eq!(reg.enumerate_basis().len(), 5);
    }

    #[test]
    fn duplicate_mode_rejected() {
        let err = ModeRegister::new(
            vec![
                ModeLabel::new(ModeKind::Arm, "a", 0),
                ModeLabel::new(ModeKind::Arm, "a", 0),
            ],
            1,
        );
        assert!(err.is_err());
    }

    #[test]
    fn inner_products_on_basis_and_conjugate_states() {
        let reg = two_modes(1);
        let h = PureState::basis_state(&reg, &[1, 0]).unwrap();
        let v = PureState::basis_state(&reg, &[0, 1]).unwrap();
        assert!((h.inner_product(&h).unwrap().re - 1.0).abs() < EPS_NORM);
        assert!(h.inner_product(&v).unwrap().norm() < EPS_AMP);

        let mut plus = StateBuilder::new(reg.clone());
        plus.add(&[1, 0], Complex64::new(1.0, 0.0)).unwrap();
        plus.add(&[0, 1], Complex64::new(1.0, 0.0)).unwrap();
        let plus = plus.build_normalized().unwrap();
        let mut minus = StateBuilder::new(reg.clone());
        minus.add(&[1, 0], Complex64::new(1.0, 0.0)).unwrap();
        minus.add(&[0, 1], Complex64::new(-1.0, 0.0)).unwrap();
        let minus = minus.build_normalized().unwrap();
        assert!(plus.inner_product(&minus).unwrap().norm() < EPS_ORTH);
    }

    #[test]
    fn tensor_concatenates_and_multiplies() {
        let eve = ModeRegister::new(vec![ModeLabel::new(ModeKind::EveInternal, "e", 0)], 1).unwrap();
        let reg = two_modes(1);
        let vac = PureState::vacuum(&eve);
        let h = PureState::basis_state(&reg, &[1, 0]).unwrap();
        let joint = vac.tensor(&h).unwrap();
        assert_eq!(joint.register().len(), 3);
        assert!((joint.amplitude(&[0, 1, 0]).re - 1.0).abs() < EPS_AMP);

        let mut plus = StateBuilder::new(reg.clone());
        plus.add(&[1, 0], Complex64::new(1.0, 0.0)).unwrap();
        plus.add(&[0, 1], Complex64::new(1.0, 0.0)).unwrap();
        let plus = plus.build_normalized().unwrap();
        let anc = ModeRegister::new(
            vec![
                ModeLabel::new(ModeKind::Arm, "x", 0),
                ModeLabel::new(ModeKind::Arm, "y", 0),
            ],
            1,
        )
        .unwrap();
        let joint = plus.tensor(&PureState::vacuum(&anc)).unwrap();
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        assert!((joint.amplitude(&[1, 0, 0, 0]).re - inv_sqrt2).abs() < 1e-12);
        assert!((joint.amplitude(&[0, 1, 0, 0]).re - inv_sqrt2).abs() < 1e-12);
    }

    #[test]
    fn tensor_rejects_overlapping_modes() {
        let reg = two_modes(1);
        let h = PureState::basis_state(&reg, &[1, 0]).unwrap();
        assert!(h.tensor(&h).is_err());
    }

    #[test]
    fn traced_support_of_product_state_is_one_dimensional() {
        let reg = two_modes(1);
        let anc = ModeRegister::new(vec![ModeLabel::new(ModeKind::Arm, "b", 0)], 1).unwrap();
        let h = PureState::basis_state(&reg, &[1, 0]).unwrap();
        let joint = h.tensor(&PureState::basis_state(&anc, &[1]).unwrap()).unwrap();
        let sub = traced_support(&joint, &reg.mode_set()).unwrap();
        assert_eq!(sub.dimension(), 1);
        let back = PureState::basis_state(sub.register(), &[1, 0]).unwrap();
        assert!(sub.basis()[0].equals_up_to_phase(&back, 1e-10));
    }

    #[test]
    fn traced_support_of_maximally_correlated_state_spans_everything() {
        // Σ_k |k⟩_kept |k⟩_disc / 2 over two 2-mode single-photon registers.
        let kept = two_modes(1);
        let disc = ModeRegister::new(
            vec![
                ModeLabel::new(ModeKind::Arm, "p", 0),
                ModeLabel::new(ModeKind::Arm, "q", 0),
            ],
            1,
        )
        .unwrap();
        let joint_reg = kept.tensor(&disc).unwrap();
        let mut b = StateBuilder::new(joint_reg);
        let half = Complex64::new(0.5, 0.0);
        b.add(&[0, 0, 0, 0], half).unwrap();
        b.add(&[0, 1, 0, 1], half).unwrap();
        b.add(&[1, 0, 1, 0], half).unwrap();
        b.add(&[1, 1, 1, 1], half).unwrap();
        let psi = b.build().unwrap();
        let sub = traced_support(&psi, &kept.mode_set()).unwrap();
        assert_eq!(sub.dimension(), 4);
    }

    #[test]
    fn traced_support_requires_kept_modes() {
        let reg = two_modes(1);
        let h = PureState::basis_state(&reg, &[1, 0]).unwrap();
        assert!(matches!(
            traced_support(&h, &BTreeSet::new()),
            Err(Error::EmptyKeptSet)
        ));
    }

    #[test]
    fn schmidt_bound_on_traced_support() {
        let kept = two_modes(2);
        let disc = ModeRegister::new(vec![ModeLabel::new(ModeKind::Arm, "b", 0)], 2).unwrap();
        let joint = kept.tensor(&disc).unwrap();
        let mut b = StateBuilder::new(joint);
        b.add(&[0, 0, 0], Complex64::new(0.5, 0.0)).unwrap();
        b.add(&[1, 0, 1], Complex64::new(0.5, 0.0)).unwrap();
        b.add(&[0, 1, 1], Complex64::new(0.5, 0.0)).unwrap();
        b.add(&[1, 1, 0], Complex64::new(0.5, 0.0)).unwrap();
        let psi = b.build().unwrap();
        let sub = traced_support(&psi, &kept.mode_set()).unwrap();
        // discarded register has 3 basis states
        assert!(sub.dimension() <= 3);
    }

    #[test]
    fn builder_norm_validation() {
        let reg = two_modes(1);
        let mut b = StateBuilder::new(reg.clone());
        b.add(&[1, 0], Complex64::new(0.5, 0.0)).unwrap();
        assert!(matches!(b.build(), Err(Error::NotNormalized { .. })));

        let mut b = StateBuilder::new(reg);
        assert!(b
            .add(&[1, 1], Complex64::new(1.0, 0.0))
            .is_err_and(|e| matches!(e, Error::TruncationExceeded { .. })));
    }

    #[test]
    fn phase_invariant_comparison() {
        let reg = two_modes(1);
        let mut a = StateBuilder::new(reg.clone());
        a.add(&[1, 0], Complex64::new(1.0, 0.0)).unwrap();
        a.add(&[0, 1], Complex64::new(0.0, 1.0)).unwrap();
        let a = a.build_normalized().unwrap();
        let mut b = StateBuilder::new(reg);
        b.add(&[1, 0], Complex64::new(0.0, -1.0)).unwrap();
        b.add(&[0, 1], Complex64::new(1.0, 0.0)).unwrap();
        let b = b.build_normalized().unwrap();
        assert!(a.equals_up_to_phase(&b, 1e-12));
    }

    #[test]
    fn embed_reorders_and_pads() {
        let small = ModeRegister::new(vec![ModeLabel::new(ModeKind::Arm, "a", 1)], 1).unwrap();
        let big = ModeRegister::new(
            vec![
                ModeLabel::new(ModeKind::Arm, "a", 0),
                ModeLabel::new(ModeKind::Arm, "a", 1),
                ModeLabel::new(ModeKind::Arm, "a", 2),
            ],
            1,
        )
        .unwrap();
        let s = PureState::basis_state(&small, &[1]).unwrap();
        let e = s.embed(&big).unwrap();
        assert!((e.amplitude(&[0, 1, 0]).re - 1.0).abs() < EPS_AMP);
    }

    #[test]
    fn photon_number_components() {
        let reg = two_modes(2);
        let mut b = StateBuilder::new(reg);
        b.add(&[0, 0], Complex64::new(0.6, 0.0)).unwrap();
        b.add(&[2, 0], Complex64::new(0.8, 0.0)).unwrap();
        let s = b.build().unwrap();
        assert!((s.photon_number_weight(0) - 0.36).abs() < 1e-12);
        assert!((s.photon_number_weight(2) - 0.64).abs() < 1e-12);
        assert!(s.photon_number_component(1).is_none());
        let two = s.photon_number_component(2).unwrap();
        assert!((two.amplitude(&[2, 0]).re - 1.0).abs() < 1e-12);
    }
}
