//! Second-homology data of simply connected 5-manifolds: canonical form,
//! the Barden classification normal form, and the group-theoretic
//! necessary conditions for Sasakian existence.

use num_integer::Integer;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AbelianError {
    #[error("torsion order {0} must be at least 2")]
    OrderTooSmall(u64),
    #[error("multiplicity {0} must be at least 1")]
    MultiplicityTooSmall(u64),
    #[error("obstruction is stated only for rank 0, got rank {0}")]
    PositiveRank(u32),
}

/// The Barden invariant i(M): 0, a finite positive power, or infinity.
/// Infinity is a distinguished variant, never a sentinel integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Barden {
    Finite(u32),
    Infinity,
}

impl Barden {
    pub const ZERO: Barden = Barden::Finite(0);

    pub fn is_zero_or_infinity(self) -> bool {
        matches!(self, Barden::Finite(0) | Barden::Infinity)
    }
}

impl std::fmt::Display for Barden {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Barden::Finite(j) => write!(f, "{j}"),
            Barden::Infinity => write!(f, "inf"),
        }
    }
}

/// One torsion summand Z_m^count of the second homology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionSummand {
    pub order: u64,
    pub count: u64,
}

/// The homological fingerprint of a Smale-Barden manifold: free rank,
/// torsion in canonical sorted form, and the Barden invariant.
///
/// Equality is group isomorphism (compared through the primary
/// decomposition) together with equal rank and Barden invariant, so
/// `Z_6^2` and `Z_2^2 + Z_3^2` compare equal.
#[derive(Debug, Clone, Eq)]
pub struct H2Data {
    pub rank: u32,
    pub torsion: Vec<TorsionSummand>,
    pub barden: Barden,
}

impl PartialEq for H2Data {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.barden == other.barden
            && self.primary_decomposition() == other.primary_decomposition()
    }
}

/// Normalizes raw (order, multiplicity) torsion data: merges duplicate
/// orders and sorts ascending.
pub fn normalize(raw: &[(u64, u64)]) -> Result<Vec<TorsionSummand>, AbelianError> {
    let mut merged: BTreeMap<u64, u64> = BTreeMap::new();
    for &(order, count) in raw {
        if order < 2 {
            return Err(AbelianError::OrderTooSmall(order));
        }
        if count < 1 {
            return Err(AbelianError::MultiplicityTooSmall(count));
        }
        *merged.entry(order).or_insert(0) += count;
    }
    Ok(merged
        .into_iter()
        .map(|(order, count)| TorsionSummand { order, count })
        .collect())
}

impl H2Data {
    pub fn new(rank: u32, raw: &[(u64, u64)], barden: Barden) -> Result<Self, AbelianError> {
        Ok(H2Data { rank, torsion: normalize(raw)?, barden })
    }

    pub fn torsion_free(rank: u32, barden: Barden) -> Self {
        H2Data { rank, torsion: Vec::new(), barden }
    }

    /// The primary decomposition: prime p -> exponent i -> c(p^i), the
    /// number of Z_{p^i} cyclic factors.
    pub fn primary_decomposition(&self) -> BTreeMap<u64, BTreeMap<u32, u64>> {
        let mut out: BTreeMap<u64, BTreeMap<u32, u64>> = BTreeMap::new();
        for t in &self.torsion {
            for (p, e) in factorize(t.order) {
                *out.entry(p).or_default().entry(e).or_insert(0) += t.count;
            }
        }
        out
    }

    /// t(p) for each prime and the maximum over all primes.
    pub fn t_invariants(&self) -> (BTreeMap<u64, u32>, u32) {
        let pd = self.primary_decomposition();
        let tp: BTreeMap<u64, u32> = pd
            .iter()
            .map(|(&p, exps)| (p, exps.values().filter(|&&c| c > 0).count() as u32))
            .collect();
        let tmax = tp.values().copied().max().unwrap_or(0);
        (tp, tmax)
    }
}

/// Trial-division factorization of n >= 2 into (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The clause of the condition G-K that fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GkClause {
    /// i(M) not in {0, infinity}.
    BardenInvariant,
    /// t(p) > k + 1 for the given prime.
    TorsionWidth(u64),
    /// i(M) = infinity but t(2) > k.
    TwoTorsionWidth,
}

impl std::fmt::Display for GkClause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GkClause::BardenInvariant => write!(f, "GK-1"),
            GkClause::TorsionWidth(p) => write!(f, "GK-2(p={p})"),
            GkClause::TwoTorsionWidth => write!(f, "GK-3"),
        }
    }
}

/// The necessary condition G-K. Returns the first violated clause.
pub fn gk_check(h: &H2Data) -> Result<(), GkClause> {
    if !h.barden.is_zero_or_infinity() {
        return Err(GkClause::BardenInvariant);
    }
    let (tp, _) = h.t_invariants();
    for (&p, &t) in &tp {
        if t > h.rank + 1 {
            return Err(GkClause::TorsionWidth(p));
        }
    }
    if h.barden == Barden::Infinity {
        let t2 = tp.get(&2).copied().unwrap_or(0);
        if t2 > h.rank {
            return Err(GkClause::TwoTorsionWidth);
        }
    }
    Ok(())
}

/// Index of the X_j summand in the Barden normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BardenIndex {
    MinusOne,
    Finite(u32),
    Infinity,
}

/// The manifold M_{j; k_1,...,k_s; r} of the Barden classification.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BardenName {
    pub j: BardenIndex,
    /// k_1 | k_2 | ... | k_s, each > 1; the M_{k_i} summands.
    pub chain: Vec<u64>,
    /// Number of M_infinity = S^2 x S^3 summands.
    pub r: u32,
}

impl std::fmt::Display for BardenName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let j = match self.j {
            BardenIndex::MinusOne => "-1".to_string(),
            BardenIndex::Finite(j) => j.to_string(),
            BardenIndex::Infinity => "inf".to_string(),
        };
        let chain = self
            .chain
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "M_{{{j};{chain};{}}}", self.r)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NotRealizable {
    #[error("invariant factor {0} occurs an odd number of times; torsion cannot pair")]
    UnpairedFactor(u64),
    #[error("Barden invariant infinity requires rank >= 1")]
    InfinityNeedsRank,
    #[error("no X_j or X_{{-1}} summand consistent with finite Barden invariant {0}")]
    NoCarrierSummand(u32),
}

/// Invariant factors k_1 | k_2 | ... of the torsion group, ascending.
fn invariant_factors(pd: &BTreeMap<u64, BTreeMap<u32, u64>>) -> Vec<u64> {
    // Per prime, list the exponents with multiplicity, descending; the
    // j-th largest across all primes multiply into the j-th largest factor.
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    let mut max_len = 0usize;
    for (&p, exps) in pd {
        let mut es: Vec<u32> = Vec::new();
        for (&e, &c) in exps.iter().rev() {
            for _ in 0..c {
                es.push(e);
            }
        }
        max_len = max_len.max(es.len());
        per_prime.push((p, es));
    }
    let mut factors_desc: Vec<u64> = Vec::new();
    for i in 0..max_len {
        let mut f = 1u64;
        for (p, es) in &per_prime {
            if let Some(&e) = es.get(i) {
                f *= p.pow(e);
            }
        }
        factors_desc.push(f);
    }
    factors_desc.reverse();
    factors_desc
}

fn pair_chain(pd: &BTreeMap<u64, BTreeMap<u32, u64>>) -> Result<Vec<u64>, NotRealizable> {
    let factors = invariant_factors(pd);
    if !factors.len().is_multiple_of(2) {
        return Err(NotRealizable::UnpairedFactor(*factors.last().unwrap()));
    }
    let mut chain = Vec::with_capacity(factors.len() / 2);
    let mut it = factors.into_iter();
    while let (Some(a), Some(b)) = (it.next(), it.next()) {
        if a != b {
            return Err(NotRealizable::UnpairedFactor(a));
        }
        chain.push(a);
    }
    Ok(chain)
}

fn remove_prime_power(
    pd: &BTreeMap<u64, BTreeMap<u32, u64>>,
    p: u64,
    e: u32,
    count: u64,
) -> Option<BTreeMap<u64, BTreeMap<u32, u64>>> {
    let mut pd = pd.clone();
    let exps = pd.get_mut(&p)?;
    let c = exps.get_mut(&e)?;
    if *c < count {
        return None;
    }
    *c -= count;
    if *c == 0 {
        exps.remove(&e);
    }
    if exps.is_empty() {
        pd.remove(&p);
    }
    Some(pd)
}

/// Barden classification normal form. For i in {0, infinity} the answer is
/// unique; for finite i >= 1 every consistent choice of the w2-carrying
/// summand (X_j versus X_{-1}) is reported.
pub fn barden_normal_form(h: &H2Data) -> Result<Vec<BardenName>, NotRealizable> {
    let pd = h.primary_decomposition();
    match h.barden {
        Barden::Finite(0) => {
            let chain = pair_chain(&pd)?;
            Ok(vec![BardenName { j: BardenIndex::Finite(0), chain, r: h.rank }])
        }
        Barden::Infinity => {
            if h.rank == 0 {
                return Err(NotRealizable::InfinityNeedsRank);
            }
            let chain = pair_chain(&pd)?;
            Ok(vec![BardenName { j: BardenIndex::Infinity, chain, r: h.rank - 1 }])
        }
        Barden::Finite(j) => {
            let mut names = Vec::new();
            // X_j summand: remove a Z_{2^j}^2 pair.
            if let Some(rest) = remove_prime_power(&pd, 2, j, 2) {
                if let Ok(chain) = pair_chain(&rest) {
                    names.push(BardenName { j: BardenIndex::Finite(j), chain, r: h.rank });
                }
            }
            // X_{-1} summand: a single Z_2, only for i = 1.
            if j == 1 {
                if let Some(rest) = remove_prime_power(&pd, 2, 1, 1) {
                    if let Ok(chain) = pair_chain(&rest) {
                        names.push(BardenName { j: BardenIndex::MinusOne, chain, r: h.rank });
                    }
                }
            }
            if names.is_empty() {
                return Err(NotRealizable::NoCarrierSummand(j));
            }
            Ok(names)
        }
    }
}

/// Rebuilds the H2 data named by a Barden normal form (Thm-table read-off).
pub fn h2_of_barden_name(name: &BardenName) -> H2Data {
    let mut raw: Vec<(u64, u64)> = name.chain.iter().map(|&k| (k, 2)).collect();
    let (rank, barden) = match name.j {
        BardenIndex::Finite(0) => (name.r, Barden::ZERO),
        BardenIndex::Finite(j) => {
            raw.push((1 << j, 2));
            (name.r, Barden::Finite(j))
        }
        BardenIndex::MinusOne => {
            raw.push((2, 1));
            (name.r, Barden::Finite(1))
        }
        BardenIndex::Infinity => (name.r + 1, Barden::Infinity),
    };
    H2Data::new(rank, &raw, barden).expect("chain entries are > 1")
}

/// The degree d >= 3 with n = (d-1)(d-2)/2, if n is a triangular number.
pub fn is_triangular(n: u64) -> Option<u64> {
    if n == 0 {
        return None;
    }
    // (d-1)(d-2) = 2n; d = (3 + sqrt(1 + 8n)) / 2
    let disc = 1 + 8 * n;
    let s = disc.isqrt();
    if s * s != disc {
        return None;
    }
    let d = (3 + s) / 2;
    if (d - 1) * (d - 2) == 2 * n {
        Some(d)
    } else {
        None
    }
}

/// A prime-power part (p, exponent, count) of the primary decomposition.
pub type PrimaryPart = (u64, u32, u64);

/// Offending prime-power parts of the at-most-10 obstruction: parts whose
/// half-count is not a triangular number (odd counts always offend).
pub fn non_triangular_parts(h: &H2Data) -> Vec<PrimaryPart> {
    let mut out = Vec::new();
    for (p, exps) in h.primary_decomposition() {
        for (e, c) in exps {
            if c == 0 {
                continue;
            }
            let triangular = c % 2 == 0 && is_triangular(c / 2).is_some();
            if !triangular {
                out.push((p, e, c));
            }
        }
    }
    out
}

/// The at-most-10 obstruction for rational homology spheres: all but at
/// most 10 of the half-counts c(p^j)/2 must be triangular numbers.
pub fn kollar_obstruction(h: &H2Data) -> Result<Result<(), Vec<PrimaryPart>>, AbelianError> {
    if h.rank > 0 {
        return Err(AbelianError::PositiveRank(h.rank));
    }
    let offenders = non_triangular_parts(h);
    if offenders.len() <= 10 {
        Ok(Ok(()))
    } else {
        Ok(Err(offenders))
    }
}

/// Failure witness of the refined triangular condition: (p, exponent,
/// count, degree) where gcd(degree, p) > 1, or degree 0 when the count is
/// not of triangular shape at all.
pub type TstarWitness = Vec<(u64, u32, u64, u64)>;

/// The refined condition c(p^j) in T*_p: the half-count must be triangular
/// with degree coprime to p. Necessary for the semi-regular sphere
/// constructions.
pub fn tstar_check(h: &H2Data) -> Result<Result<(), TstarWitness>, AbelianError> {
    if h.rank > 0 {
        return Err(AbelianError::PositiveRank(h.rank));
    }
    let mut witness: TstarWitness = Vec::new();
    for (p, exps) in h.primary_decomposition() {
        for (e, c) in exps {
            if c == 0 {
                continue;
            }
            let d = if c % 2 == 0 { is_triangular(c / 2) } else { None };
            match d {
                Some(d) if d.gcd(&p) == 1 => {}
                Some(d) => witness.push((p, e, c, d)),
                None => witness.push((p, e, c, 0)),
            }
        }
    }
    if witness.is_empty() {
        Ok(Ok(()))
    } else {
        Ok(Err(witness))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(rank: u32, raw: &[(u64, u64)], barden: Barden) -> H2Data {
        H2Data::new(rank, raw, barden).unwrap()
    }

    #[test]
    fn normalize_merges_and_sorts() {
        assert_eq!(
            normalize(&[(3, 2), (3, 2)]).unwrap(),
            vec![TorsionSummand { order: 3, count: 4 }]
        );
        assert_eq!(
            normalize(&[(6, 2)]).unwrap(),
            vec![TorsionSummand { order: 6, count: 2 }]
        );
        assert_eq!(
            normalize(&[(5, 4), (3, 2)]).unwrap(),
            vec![
                TorsionSummand { order: 3, count: 2 },
                TorsionSummand { order: 5, count: 4 }
            ]
        );
    }

    #[test]
    fn normalize_rejects_bad_input() {
        assert!(normalize(&[(1, 2)]).is_err());
        assert!(normalize(&[(3, 0)]).is_err());
    }

    #[test]
    fn primary_decomposition_examples() {
        let pd = h(0, &[(6, 2)], Barden::ZERO).primary_decomposition();
        assert_eq!(pd[&2][&1], 2);
        assert_eq!(pd[&3][&1], 2);

        for j in 1..5u32 {
            let pd = h(0, &[(1 << j, 2)], Barden::Finite(j)).primary_decomposition();
            assert_eq!(pd[&2][&j], 2);
        }

        let pd = h(0, &[(12, 2), (3, 4)], Barden::ZERO).primary_decomposition();
        assert_eq!(pd[&2][&2], 2);
        assert_eq!(pd[&3][&1], 6);
    }

    #[test]
    fn isomorphic_groups_compare_equal() {
        assert_eq!(h(1, &[(6, 2)], Barden::ZERO), h(1, &[(2, 2), (3, 2)], Barden::ZERO));
        assert_ne!(h(1, &[(4, 2)], Barden::ZERO), h(1, &[(2, 4)], Barden::ZERO));
    }

    #[test]
    fn t_invariant_examples() {
        let (tp, tmax) = h(0, &[(3, 2), (5, 4)], Barden::ZERO).t_invariants();
        assert_eq!(tp[&3], 1);
        assert_eq!(tp[&5], 1);
        assert_eq!(tmax, 1);

        let (tp, tmax) = h(0, &[(2, 2), (4, 2)], Barden::ZERO).t_invariants();
        assert_eq!(tp[&2], 2);
        assert_eq!(tmax, 2);

        let (_, tmax) = H2Data::torsion_free(3, Barden::ZERO).t_invariants();
        assert_eq!(tmax, 0);
    }

    #[test]
    fn gk_examples() {
        assert_eq!(
            gk_check(&h(0, &[(2, 1)], Barden::Finite(1))),
            Err(GkClause::BardenInvariant)
        );
        assert_eq!(
            gk_check(&h(0, &[(2, 2), (4, 2)], Barden::ZERO)),
            Err(GkClause::TorsionWidth(2))
        );
        assert_eq!(gk_check(&h(1, &[(3, 2), (5, 4)], Barden::Infinity)), Ok(()));
        // clause 3: i = inf with 2-torsion at rank 0 is not enough rank
        assert_eq!(
            gk_check(&h(0, &[(2, 2)], Barden::Infinity)),
            Err(GkClause::TwoTorsionWidth)
        );
    }

    #[test]
    fn barden_normal_form_examples() {
        let n = barden_normal_form(&h(1, &[(7, 2)], Barden::ZERO)).unwrap();
        assert_eq!(n, vec![BardenName { j: BardenIndex::Finite(0), chain: vec![7], r: 1 }]);

        let n = barden_normal_form(&h(0, &[(3, 4)], Barden::ZERO)).unwrap();
        assert_eq!(n[0].chain, vec![3, 3]);
        assert_eq!(n[0].r, 0);

        assert_eq!(
            barden_normal_form(&h(0, &[(3, 3)], Barden::ZERO)),
            Err(NotRealizable::UnpairedFactor(3))
        );

        assert_eq!(
            barden_normal_form(&H2Data::torsion_free(0, Barden::Infinity)),
            Err(NotRealizable::InfinityNeedsRank)
        );
    }

    #[test]
    fn barden_finite_invariant_choices() {
        // Z_2 with i = 1 is X_{-1}
        let n = barden_normal_form(&h(0, &[(2, 1)], Barden::Finite(1))).unwrap();
        assert_eq!(n, vec![BardenName { j: BardenIndex::MinusOne, chain: vec![], r: 0 }]);

        // Z_2^3 with i = 1: X_1 leaves Z_2 unpaired; X_{-1} leaves Z_2^2.
        let n = barden_normal_form(&h(0, &[(2, 3)], Barden::Finite(1))).unwrap();
        assert_eq!(n, vec![BardenName { j: BardenIndex::MinusOne, chain: vec![2], r: 0 }]);

        // Z_2^4 with i = 1: only the X_1 reading pairs up.
        let n = barden_normal_form(&h(0, &[(2, 4)], Barden::Finite(1))).unwrap();
        assert_eq!(n, vec![BardenName { j: BardenIndex::Finite(1), chain: vec![2], r: 0 }]);

        // Z_4^2 with i = 2 is X_2.
        let n = barden_normal_form(&h(0, &[(4, 2)], Barden::Finite(2))).unwrap();
        assert_eq!(n, vec![BardenName { j: BardenIndex::Finite(2), chain: vec![], r: 0 }]);
    }

    #[test]
    fn invariant_factor_chain_divides() {
        let cases: Vec<H2Data> = vec![
            h(2, &[(2, 2), (4, 2), (3, 2)], Barden::ZERO),
            h(0, &[(12, 2), (3, 4)], Barden::ZERO),
            h(1, &[(6, 2), (5, 2)], Barden::ZERO),
        ];
        for case in cases {
            if let Ok(names) = barden_normal_form(&case) {
                for name in names {
                    for w in name.chain.windows(2) {
                        assert_eq!(w[1] % w[0], 0, "chain must divide: {:?}", name.chain);
                    }
                }
            }
        }
    }

    #[test]
    fn triangular_examples() {
        assert_eq!(is_triangular(1), Some(3));
        assert_eq!(is_triangular(3), Some(4));
        assert_eq!(is_triangular(2), None);
        assert_eq!(is_triangular(0), None);
    }

    #[test]
    fn triangular_matches_enumeration() {
        let mut set = std::collections::BTreeMap::new();
        for d in 3u64..=2000 {
            set.insert((d - 1) * (d - 2) / 2, d);
        }
        let bound = (1999u64) * 1998 / 2;
        for n in 1..=20_000u64 {
            assert!(n <= bound);
            assert_eq!(is_triangular(n), set.get(&n).copied(), "n={n}");
        }
    }

    #[test]
    fn kollar_examples() {
        assert_eq!(kollar_obstruction(&h(0, &[(5, 6)], Barden::ZERO)).unwrap(), Ok(()));

        // 11 distinct prime parts, each of size 4 (g = 2 not triangular)
        let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
        let raw: Vec<(u64, u64)> = primes.iter().map(|&p| (p, 4)).collect();
        let res = kollar_obstruction(&h(0, &raw, Barden::ZERO)).unwrap();
        assert_eq!(res.unwrap_err().len(), 11);

        assert_eq!(
            kollar_obstruction(&h(0, &[(3, 2), (5, 12)], Barden::ZERO)).unwrap(),
            Ok(())
        );

        assert!(kollar_obstruction(&h(1, &[(3, 2)], Barden::ZERO)).is_err());
    }

    #[test]
    fn tstar_examples() {
        assert_eq!(tstar_check(&h(0, &[(5, 6)], Barden::ZERO)).unwrap(), Ok(()));
        let res = tstar_check(&h(0, &[(2, 6)], Barden::ZERO)).unwrap();
        assert_eq!(res.unwrap_err(), vec![(2, 1, 6, 4)]);
        let res = tstar_check(&h(0, &[(3, 2)], Barden::ZERO)).unwrap();
        assert_eq!(res.unwrap_err(), vec![(3, 1, 2, 3)]);
    }
}
