//! Brute-force occupation-number Fock space over two mode families.
//!
//! Family `a` modes come first, then family `b`. Inside a family the modes
//! are ordered by spin label (in the order given by the configuration) and
//! then by orbital index. Basis states are occupation vectors enumerated in
//! lexicographic order, so the vacuum is always index 0.
//!
//! Fermionic operators carry a sign string over every earlier fermionic mode
//! of the global order, so fermions of the two families anticommute with
//! each other. Bosonic operators have `sqrt(n + 1)` amplitudes and map any
//! state whose target occupation exceeds the cutoff (or whose family would
//! exceed the optional quanta cap) to zero.

mod operator;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

pub use operator::{commutator, expectation, OperatorMatrix, StateVector};

use crate::mode_dist::{CompositeKind, DiscreteModeDistribution, SpinLabel, Statistics};
use crate::numeric::ExactComplexSum;
use crate::{Error, Result};

/// Default upper bound on the basis dimension.
pub const DEFAULT_DIM_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockSpaceConfig {
    /// Orbital modes of particle `a` (per spin label).
    pub na: usize,
    /// Orbital modes of particle `b` (per spin label).
    pub nb: usize,
    pub stat_a: Statistics,
    pub stat_b: Statistics,
    /// Maximum occupation of a bosonic mode. Ignored for fermions.
    pub boson_cutoff: u8,
    /// Spin labels represented for family `a`; each gets its own `na` modes.
    pub spins_a: Vec<SpinLabel>,
    pub spins_b: Vec<SpinLabel>,
    /// Optional bound on the total number of quanta in each family.
    pub quanta_cap: Option<usize>,
    pub dim_limit: usize,
}

impl FockSpaceConfig {
    pub fn new(na: usize, nb: usize, stat_a: Statistics, stat_b: Statistics) -> Self {
        Self {
            na,
            nb,
            stat_a,
            stat_b,
            boson_cutoff: 2,
            spins_a: alloc::vec![SpinLabel(0)],
            spins_b: alloc::vec![SpinLabel(0)],
            quanta_cap: None,
            dim_limit: DEFAULT_DIM_LIMIT,
        }
    }

    pub fn for_kind(kind: CompositeKind, na: usize, nb: usize) -> Self {
        Self::new(na, nb, kind.stat_a(), kind.stat_b())
    }

    pub fn with_boson_cutoff(mut self, cutoff: u8) -> Self {
        self.boson_cutoff = cutoff;
        self
    }

    /// Represents the given spin labels (duplicates removed, order kept).
    pub fn with_spins(mut self, spins_a: &[SpinLabel], spins_b: &[SpinLabel]) -> Self {
        fn dedup(spins: &[SpinLabel]) -> Vec<SpinLabel> {
            let mut out: Vec<SpinLabel> = Vec::new();
            for &s in spins {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
            out
        }
        self.spins_a = dedup(spins_a);
        self.spins_b = dedup(spins_b);
        self
    }

    pub fn with_quanta_cap(mut self, cap: usize) -> Self {
        self.quanta_cap = Some(cap);
        self
    }

    pub fn with_dim_limit(mut self, limit: usize) -> Self {
        self.dim_limit = limit;
        self
    }

    fn radices(&self, family: Family) -> Vec<u8> {
        let (n, spins, stat) = match family {
            Family::A => (self.na, self.spins_a.len(), self.stat_a),
            Family::B => (self.nb, self.spins_b.len(), self.stat_b),
        };
        let radix = match stat {
            Statistics::Fermion => 2,
            Statistics::Boson => self.boson_cutoff.saturating_add(1),
        };
        alloc::vec![radix; n * spins]
    }

    /// Basis dimension this configuration would produce.
    pub fn dimension(&self) -> u128 {
        count_states(&self.radices(Family::A), self.quanta_cap)
            .saturating_mul(count_states(&self.radices(Family::B), self.quanta_cap))
    }

    fn validate(&self) -> Result<()> {
        if self.na == 0 || self.nb == 0 {
            return Err(Error::InvalidConfig("each family needs at least one mode"));
        }
        if self.spins_a.is_empty() || self.spins_b.is_empty() {
            return Err(Error::InvalidConfig("each family needs at least one spin label"));
        }
        let has_boson = self.stat_a == Statistics::Boson || self.stat_b == Statistics::Boson;
        if has_boson && self.boson_cutoff == 0 {
            return Err(Error::InvalidConfig("boson cutoff must be at least 1"));
        }
        let dim = self.dimension();
        if dim > self.dim_limit as u128 {
            return Err(Error::DimensionOverflow {
                dim,
                limit: self.dim_limit,
            });
        }
        Ok(())
    }
}

fn count_states(radices: &[u8], cap: Option<usize>) -> u128 {
    match cap {
        None => radices.iter().fold(1u128, |acc, &r| acc.saturating_mul(r as u128)),
        Some(cap) => {
            // ways[t] = number of prefixes holding exactly t quanta
            let mut ways = alloc::vec![0u128; cap + 1];
            ways[0] = 1;
            for &r in radices {
                let mut next = alloc::vec![0u128; cap + 1];
                for (t, &w) in ways.iter().enumerate() {
                    if w == 0 {
                        continue;
                    }
                    for d in 0..r as usize {
                        if t + d > cap {
                            break;
                        }
                        next[t + d] = next[t + d].saturating_add(w);
                    }
                }
                ways = next;
            }
            ways.iter().fold(0u128, |acc, &w| acc.saturating_add(w))
        }
    }
}

#[derive(Debug, Clone)]
enum Lookup {
    MixedRadix,
    Map(BTreeMap<Vec<u8>, usize>),
}

/// Occupation vectors of one family.
#[derive(Debug, Clone)]
struct FamilyBasis {
    radices: Vec<u8>,
    states: Vec<u8>,
    len: usize,
    lookup: Lookup,
}

impl FamilyBasis {
    fn build(radices: Vec<u8>, cap: Option<usize>) -> Self {
        let width = radices.len();
        let mut states = Vec::new();
        let mut current = alloc::vec![0u8; width];
        enumerate(&radices, 0, cap, &mut current, &mut states);
        let len = states.len().checked_div(width).unwrap_or(1);
        let lookup = match cap {
            None => Lookup::MixedRadix,
            Some(_) => Lookup::Map(
                (0..len)
                    .map(|i| (states[i * width..(i + 1) * width].to_vec(), i))
                    .collect(),
            ),
        };
        Self {
            radices,
            states,
            len,
            lookup,
        }
    }

    fn width(&self) -> usize {
        self.radices.len()
    }

    fn state(&self, i: usize) -> &[u8] {
        let w = self.width();
        &self.states[i * w..(i + 1) * w]
    }

    fn index_of(&self, occ: &[u8]) -> Option<usize> {
        if occ.len() != self.width() || occ.iter().zip(&self.radices).any(|(&o, &r)| o >= r) {
            return None;
        }
        match &self.lookup {
            Lookup::MixedRadix => Some(
                occ.iter()
                    .zip(&self.radices)
                    .fold(0usize, |acc, (&o, &r)| acc * r as usize + o as usize),
            ),
            Lookup::Map(map) => map.get(occ).copied(),
        }
    }
}

fn enumerate(radices: &[u8], pos: usize, remaining: Option<usize>, cur: &mut [u8], out: &mut Vec<u8>) {
    if pos == radices.len() {
        out.extend_from_slice(cur);
        return;
    }
    for d in 0..radices[pos] {
        let rest = match remaining {
            Some(r) if d as usize > r => break,
            Some(r) => Some(r - d as usize),
            None => None,
        };
        cur[pos] = d;
        enumerate(radices, pos + 1, rest, cur, out);
    }
    cur[pos] = 0;
}

/// One mode of the global ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mode {
    pub family: Family,
    pub orbital: usize,
    pub spin: SpinLabel,
    pub statistics: Statistics,
}

#[derive(Debug, Clone)]
pub struct FockSpace {
    config: FockSpaceConfig,
    modes: Vec<Mode>,
    a: FamilyBasis,
    b: FamilyBasis,
}

impl FockSpace {
    pub fn build(config: FockSpaceConfig) -> Result<Self> {
        config.validate()?;
        let mut modes = Vec::new();
        for &spin in &config.spins_a {
            for orbital in 0..config.na {
                modes.push(Mode {
                    family: Family::A,
                    orbital,
                    spin,
                    statistics: config.stat_a,
                });
            }
        }
        for &spin in &config.spins_b {
            for orbital in 0..config.nb {
                modes.push(Mode {
                    family: Family::B,
                    orbital,
                    spin,
                    statistics: config.stat_b,
                });
            }
        }
        let a = FamilyBasis::build(config.radices(Family::A), config.quanta_cap);
        let b = FamilyBasis::build(config.radices(Family::B), config.quanta_cap);
        Ok(Self { config, modes, a, b })
    }

    pub fn config(&self) -> &FockSpaceConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.a.len * self.b.len
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    /// Occupation vector of basis state `index` (family `a` then `b`).
    pub fn occupation(&self, index: usize) -> Vec<u8> {
        let (ia, ib) = (index / self.b.len, index % self.b.len);
        let mut occ = self.a.state(ia).to_vec();
        occ.extend_from_slice(self.b.state(ib));
        occ
    }

    pub fn index_of(&self, occupation: &[u8]) -> Option<usize> {
        if occupation.len() != self.modes.len() {
            return None;
        }
        let (oa, ob) = occupation.split_at(self.a.width());
        Some(self.a.index_of(oa)? * self.b.len + self.b.index_of(ob)?)
    }

    /// Global index of the mode `(family, orbital, spin)`.
    pub fn mode_index(&self, family: Family, orbital: usize, spin: SpinLabel) -> Result<usize> {
        let (n, spins, offset) = match family {
            Family::A => (self.config.na, &self.config.spins_a, 0),
            Family::B => (self.config.nb, &self.config.spins_b, self.a.width()),
        };
        if orbital >= n {
            return Err(Error::IndexOutOfRange { index: orbital, len: n });
        }
        let slot = spins
            .iter()
            .position(|&s| s == spin)
            .ok_or(Error::SpinNotInSpace(spin))?;
        Ok(offset + slot * n + orbital)
    }

    /// Action of a single creation (`raise`) or annihilation operator on a
    /// basis state: the target index and amplitude, or `None` for zero.
    pub fn ladder(&self, mode: usize, raise: bool, index: usize) -> Option<(usize, f64)> {
        let mut occ = self.occupation(index);
        let current = occ[mode];
        let stat = self.modes[mode].statistics;
        let (next, amp) = match (stat, raise) {
            (Statistics::Fermion, true) if current == 0 => (1, 1.0),
            (Statistics::Fermion, false) if current == 1 => (0, 1.0),
            (Statistics::Fermion, _) => return None,
            (Statistics::Boson, true) if current < self.config.boson_cutoff => {
                (current + 1, ((current + 1) as f64).sqrt())
            }
            (Statistics::Boson, false) if current > 0 => (current - 1, (current as f64).sqrt()),
            (Statistics::Boson, _) => return None,
        };
        let parity = match stat {
            Statistics::Boson => 0,
            Statistics::Fermion => self.modes[..mode]
                .iter()
                .zip(&occ)
                .filter(|(m, &o)| m.statistics == Statistics::Fermion && o == 1)
                .count(),
        };
        occ[mode] = next;
        // fails only when the family quanta cap is exceeded
        let target = self.index_of(&occ)?;
        let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
        Some((target, sign * amp))
    }

    fn ladder_op(&self, mode: usize, raise: bool) -> OperatorMatrix<'_> {
        let triplets = (0..self.dim())
            .filter_map(|j| {
                self.ladder(mode, raise, j)
                    .map(|(i, amp)| (i, j, Complex64::new(amp, 0.0)))
            })
            .collect();
        OperatorMatrix::from_triplets(self, triplets)
    }

    pub fn creation_op(&self, family: Family, orbital: usize, spin: SpinLabel) -> Result<OperatorMatrix<'_>> {
        Ok(self.ladder_op(self.mode_index(family, orbital, spin)?, true))
    }

    pub fn annihilation_op(&self, family: Family, orbital: usize, spin: SpinLabel) -> Result<OperatorMatrix<'_>> {
        Ok(self.ladder_op(self.mode_index(family, orbital, spin)?, false))
    }

    pub fn number_op(&self, family: Family, orbital: usize, spin: SpinLabel) -> Result<OperatorMatrix<'_>> {
        let mode = self.mode_index(family, orbital, spin)?;
        let triplets = (0..self.dim())
            .filter_map(|j| {
                let n = self.occupation(j)[mode];
                (n > 0).then(|| (j, j, Complex64::new(n as f64, 0.0)))
            })
            .collect();
        Ok(OperatorMatrix::from_triplets(self, triplets))
    }

    /// `c_f^+ = sum_nm f_nm a^+_{n,r} b^+_{m,s}` with `r`, `s` the spins of `f`,
    /// assembled from products of single-mode creation matrices.
    pub fn composite_creation(&self, f: &DiscreteModeDistribution) -> Result<OperatorMatrix<'_>> {
        self.check_shape(f)?;
        let a_ops = (0..f.na())
            .map(|n| self.creation_op(Family::A, n, f.spin_a()))
            .collect::<Result<Vec<_>>>()?;
        let b_ops = (0..f.nb())
            .map(|m| self.creation_op(Family::B, m, f.spin_b()))
            .collect::<Result<Vec<_>>>()?;
        let mut products = Vec::new();
        for (n, a) in a_ops.iter().enumerate() {
            for (m, b) in b_ops.iter().enumerate() {
                let coeff = f.get(n, m);
                if coeff != Complex64::new(0.0, 0.0) {
                    products.push((coeff, a.mul(b)?));
                }
            }
        }
        let terms: Vec<_> = products.iter().map(|(c, op)| (*c, op)).collect();
        OperatorMatrix::linear_combination(self, &terms)
    }

    /// `(c_f^+)^2 |0> = sum f_nm f_NM a^+_n b^+_m a^+_N b^+_M |0>`, unnormalized.
    ///
    /// Each coefficient `f_nm f_NM` is formed once and multiplied by the
    /// exact ladder amplitude, and contributions are summed exactly, so
    /// terms that cancel under the (anti)commutation rules cancel bit-exactly.
    pub fn two_composite_state(&self, f: &DiscreteModeDistribution) -> Result<StateVector> {
        self.check_shape(f)?;
        let (na, nb) = f.shape();
        let modes_a = (0..na)
            .map(|n| self.mode_index(Family::A, n, f.spin_a()))
            .collect::<Result<Vec<_>>>()?;
        let modes_b = (0..nb)
            .map(|m| self.mode_index(Family::B, m, f.spin_b()))
            .collect::<Result<Vec<_>>>()?;
        let mut sums: BTreeMap<usize, ExactComplexSum> = BTreeMap::new();
        for n in 0..na {
            for m in 0..nb {
                for big_n in 0..na {
                    for big_m in 0..nb {
                        let coeff = f.get(n, m) * f.get(big_n, big_m);
                        if coeff == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        // rightmost operator acts first
                        let sequence = [modes_b[big_m], modes_a[big_n], modes_b[m], modes_a[n]];
                        let mut index = 0;
                        let mut amp = 1.0;
                        let mut alive = true;
                        for mode in sequence {
                            match self.ladder(mode, true, index) {
                                Some((next, a)) => {
                                    index = next;
                                    amp *= a;
                                }
                                None => {
                                    alive = false;
                                    break;
                                }
                            }
                        }
                        if alive {
                            sums.entry(index).or_default().add(coeff * amp);
                        }
                    }
                }
            }
        }
        let mut amps = alloc::vec![Complex64::new(0.0, 0.0); self.dim()];
        for (index, sum) in sums {
            amps[index] = sum.total();
        }
        StateVector::from_amplitudes(amps)
    }

    pub(crate) fn check_shape(&self, f: &DiscreteModeDistribution) -> Result<()> {
        let expected = (self.config.na, self.config.nb);
        if f.shape() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                found: f.shape(),
            });
        }
        Ok(())
    }

    pub fn identity(&self) -> OperatorMatrix<'_> {
        OperatorMatrix::identity(self)
    }

    pub fn vacuum(&self) -> StateVector {
        StateVector::basis(self.dim(), 0)
    }

    /// Basis states on which a single raising operator is never truncated:
    /// every bosonic mode below the cutoff and every family below the quanta
    /// cap.
    pub fn truncation_safe(&self, index: usize) -> bool {
        let occ = self.occupation(index);
        let cutoff = self.config.boson_cutoff;
        let modes_ok = self
            .modes
            .iter()
            .zip(&occ)
            .all(|(m, &o)| m.statistics == Statistics::Fermion || o < cutoff);
        let cap_ok = match self.config.quanta_cap {
            None => true,
            Some(cap) => {
                let (oa, ob) = occ.split_at(self.a.width());
                let qa: usize = oa.iter().map(|&o| o as usize).sum();
                let qb: usize = ob.iter().map(|&o| o as usize).sum();
                qa < cap && qb < cap
            }
        };
        modes_ok && cap_ok
    }

    pub fn truncation_safe_columns(&self) -> Vec<bool> {
        (0..self.dim()).map(|i| self.truncation_safe(i)).collect()
    }

    /// One `occupation-vector: index` line per basis state, e.g. `01|10: 6`.
    pub fn basis_dump(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim() {
            let occ = self.occupation(i);
            let (oa, ob) = occ.split_at(self.a.width());
            for o in oa {
                let _ = write!(out, "{o}");
            }
            out.push('|');
            for o in ob {
                let _ = write!(out, "{o}");
            }
            let _ = writeln!(out, ": {i}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Statistics::{Boson, Fermion};

    fn space(na: usize, nb: usize, sa: Statistics, sb: Statistics) -> FockSpace {
        FockSpace::build(FockSpaceConfig::new(na, nb, sa, sb)).unwrap()
    }

    #[test]
    fn basis_dimensions() {
        assert_eq!(space(1, 1, Fermion, Fermion).dim(), 4);
        assert_eq!(space(1, 1, Fermion, Boson).dim(), 6);
        assert_eq!(space(2, 2, Fermion, Fermion).dim(), 16);
        assert_eq!(space(3, 3, Boson, Boson).dim(), 729);
    }

    #[test]
    fn vacuum_is_index_zero_and_enumeration_is_lexicographic() {
        let s = space(2, 1, Boson, Fermion);
        assert_eq!(s.occupation(0), [0, 0, 0]);
        for i in 1..s.dim() {
            assert!(s.occupation(i - 1) < s.occupation(i));
            assert_eq!(s.index_of(&s.occupation(i)), Some(i));
        }
    }

    #[test]
    fn quanta_cap_counts_and_lookup() {
        let cfg = FockSpaceConfig::new(3, 3, Boson, Boson).with_quanta_cap(2);
        // per family: states of 3 modes with <= 2 quanta = 1 + 3 + 6
        assert_eq!(cfg.dimension(), 100);
        let s = FockSpace::build(cfg).unwrap();
        assert_eq!(s.dim(), 100);
        for i in 0..s.dim() {
            assert_eq!(s.index_of(&s.occupation(i)), Some(i));
        }
        assert_eq!(s.index_of(&[1, 1, 1, 0, 0, 0]), None);
    }

    #[test]
    fn dimension_overflow_is_reported() {
        let cfg = FockSpaceConfig::new(10, 10, Boson, Boson);
        assert!(matches!(
            FockSpace::build(cfg),
            Err(Error::DimensionOverflow {
                limit: DEFAULT_DIM_LIMIT,
                ..
            })
        ));
        let cfg = FockSpaceConfig::new(2, 2, Fermion, Fermion).with_dim_limit(8);
        assert!(matches!(
            FockSpace::build(cfg),
            Err(Error::DimensionOverflow { dim: 16, .. })
        ));
    }

    #[test]
    fn mode_lookup_errors() {
        let s = space(2, 3, Fermion, Boson);
        assert_eq!(s.mode_index(Family::B, 1, SpinLabel(0)), Ok(3));
        assert_eq!(
            s.mode_index(Family::A, 2, SpinLabel(0)),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        );
        assert_eq!(
            s.mode_index(Family::A, 0, SpinLabel(7)),
            Err(Error::SpinNotInSpace(SpinLabel(7)))
        );
    }

    #[test]
    fn spin_slots_get_their_own_modes() {
        let cfg =
            FockSpaceConfig::new(2, 1, Fermion, Fermion).with_spins(&[SpinLabel(0), SpinLabel(1)], &[SpinLabel(0)]);
        let s = FockSpace::build(cfg).unwrap();
        assert_eq!(s.modes().len(), 5);
        assert_eq!(s.mode_index(Family::A, 1, SpinLabel(1)), Ok(3));
        assert_eq!(s.mode_index(Family::B, 0, SpinLabel(0)), Ok(4));
    }

    #[test]
    fn basis_dump_format() {
        let s = space(1, 1, Fermion, Boson);
        let dump = s.basis_dump();
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[0], "0|0: 0");
        assert_eq!(lines[5], "1|2: 5");
    }

    #[test]
    fn two_builds_are_identical() {
        let cfg = FockSpaceConfig::new(2, 2, Boson, Fermion).with_quanta_cap(3);
        let s1 = FockSpace::build(cfg.clone()).unwrap();
        let s2 = FockSpace::build(cfg).unwrap();
        assert_eq!(s1.basis_dump(), s2.basis_dump());
    }
}
