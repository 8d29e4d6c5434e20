//! Certificate constructors: given target invariants, produce a
//! `SeifertCertificate` that the verifier in `seifert` independently
//! confirms. Every constructor re-verifies its output before returning.

use crate::abelian::{is_triangular, normalize, TorsionSummand};
use crate::lattice::{DivisorClass, SurfaceKind, SurfaceLattice};
use crate::seifert::{Assumptions, OrbitDivisor, SeifertCertificate, SeifertError};
use num_integer::Integer;
use thiserror::Error;

/// Target: H2 = Z ⊕ (⊕ Z_{m_i}^{2 g_i}) with the given spin type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneRequest {
    /// (multiplicity, genus) pairs; multiplicities pairwise coprime.
    pub pairs: Vec<(u64, u64)>,
    pub spin: bool,
}

/// Target: rank 0, H2 = ⊕ Z_{m_i}^{2 g_i} (spin is forced at rank 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereRequest {
    pub parts: Vec<(u64, u64)>,
}

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("the requested spin type is not reachable for this input")]
    SpinTargetUnreachable,
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
}

fn pre(msg: impl Into<String>) -> ConstructError {
    ConstructError::PreconditionViolated(msg.into())
}

// ---------------------------------------------------------------------------
// Diophantine solver
// ---------------------------------------------------------------------------

/// A solution of extra_coeff * beta + sum coeffs[i] * b[i] = target with
/// 0 < b[i] < moduli[i] and gcd(b[i], moduli[i]) = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiophantineSolution {
    pub beta: i64,
    pub b: Vec<u64>,
}

fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    let m = m as i64;
    let g = a.rem_euclid(m).extended_gcd(&m);
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m) as u64)
}

/// Solves extra_coeff * beta + sum coeffs[i] * b[i] = target over unit
/// residues 0 < b[i] < moduli[i], gcd(b[i], moduli[i]) = 1, beta free.
///
/// When each modulus divides the extra coefficient and every other
/// coefficient (the pairwise-coprime setting of the constructors), the
/// residues are forced and solved directly; otherwise the unit box is
/// enumerated.
pub fn solve_linear_combination(
    coeffs: &[i64],
    moduli: &[u64],
    extra_coeff: i64,
    target: i64,
) -> Option<DiophantineSolution> {
    assert_eq!(coeffs.len(), moduli.len());
    if moduli.iter().any(|&m| m < 2) {
        return None;
    }
    if extra_coeff != 0 && forced_residues_apply(coeffs, moduli, extra_coeff) {
        if let Some(authoritative) = solve_forced(coeffs, moduli, extra_coeff, target) {
            return authoritative;
        }
        // Some coefficient is not invertible mod its modulus: residues are
        // not forced after all; fall through to enumeration.
    }
    enumerate_units(coeffs, moduli, extra_coeff, target)
}

fn forced_residues_apply(coeffs: &[i64], moduli: &[u64], extra_coeff: i64) -> bool {
    for (i, &mi) in moduli.iter().enumerate() {
        let mi = mi as i64;
        if extra_coeff.rem_euclid(mi) != 0 {
            return false;
        }
        for (j, &cj) in coeffs.iter().enumerate() {
            if i != j && cj.rem_euclid(mi) != 0 {
                return false;
            }
        }
    }
    true
}

/// Outer None: not forced (fall back). Inner Option: authoritative answer.
fn solve_forced(
    coeffs: &[i64],
    moduli: &[u64],
    extra_coeff: i64,
    target: i64,
) -> Option<Option<DiophantineSolution>> {
    let mut b = Vec::with_capacity(moduli.len());
    for (&ci, &mi) in coeffs.iter().zip(moduli) {
        let inv = mod_inverse(ci, mi)?;
        let bi = (inv as u128 * target.rem_euclid(mi as i64) as u128 % mi as u128) as u64;
        if bi == 0 || bi.gcd(&mi) != 1 {
            // The residue is forced yet invalid: no solution exists.
            return Some(None);
        }
        b.push(bi);
    }
    let sum: i64 = coeffs.iter().zip(&b).map(|(&c, &bi)| c * bi as i64).sum();
    let rest = target - sum;
    if rest % extra_coeff != 0 {
        return Some(None);
    }
    Some(Some(DiophantineSolution { beta: rest / extra_coeff, b }))
}

fn enumerate_units(
    coeffs: &[i64],
    moduli: &[u64],
    extra_coeff: i64,
    target: i64,
) -> Option<DiophantineSolution> {
    let units: Vec<Vec<u64>> = moduli
        .iter()
        .map(|&m| (1..m).filter(|b| b.gcd(&m) == 1).collect())
        .collect();
    let box_size: u128 = units.iter().map(|u| u.len() as u128).product();
    assert!(box_size <= 10_000_000, "enumeration box too large");
    let mut idx = vec![0usize; units.len()];
    loop {
        let sum: i64 = coeffs
            .iter()
            .zip(units.iter().zip(&idx))
            .map(|(&c, (u, &i))| c * u[i] as i64)
            .sum();
        let rest = target - sum;
        let hit = if extra_coeff == 0 {
            (rest == 0).then_some(0)
        } else {
            (rest % extra_coeff == 0).then(|| rest / extra_coeff)
        };
        if let Some(beta) = hit {
            let b = units.iter().zip(&idx).map(|(u, &i)| u[i]).collect();
            return Some(DiophantineSolution { beta, b });
        }
        // odometer
        let mut k = 0;
        loop {
            if k == units.len() {
                return None;
            }
            idx[k] += 1;
            if idx[k] < units[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

const BETA_SEARCH_CAP: i64 = 100_000;

fn check_pairs(pairs: &[(u64, u64)]) -> Result<(), ConstructError> {
    for &(m, g) in pairs {
        if m < 2 {
            return Err(pre(format!("multiplicity {m} must be >= 2")));
        }
        if g < 1 {
            return Err(pre(format!("genus must be >= 1 for multiplicity {m}")));
        }
    }
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            if pairs[i].0.gcd(&pairs[j].0) != 1 {
                return Err(pre(format!(
                    "multiplicities {} and {} are not coprime",
                    pairs[i].0, pairs[j].0
                )));
            }
        }
    }
    Ok(())
}

fn lcm_of(pairs: &[(u64, u64)]) -> u64 {
    pairs.iter().fold(1u64, |l, &(m, _)| l.lcm(&m))
}

/// Smallest beta with m*beta + offset >= 1.
fn min_beta(m: i64, offset: i64) -> i64 {
    (1 - offset).div_euclid(m) + i64::from((1 - offset).rem_euclid(m) != 0)
}

fn expected_torsion(pairs: &[(u64, u64)]) -> Vec<TorsionSummand> {
    let raw: Vec<(u64, u64)> = pairs.iter().map(|&(m, g)| (m, 2 * g)).collect();
    normalize(&raw).expect("checked pairs")
}

/// Re-verifies a freshly built certificate against the requested
/// invariants; any mismatch is an internal construction bug.
fn verified(
    cert: SeifertCertificate,
    rank: u32,
    torsion: &[TorsionSummand],
    spin: bool,
) -> Result<SeifertCertificate, ConstructError> {
    if let Err(v) = cert.validate() {
        return Err(ConstructError::ConstructionFailed(format!("invalid certificate: {v:?}")));
    }
    let inv = cert.invariants()?;
    if !cert.kahler_positive()? {
        return Err(ConstructError::ConstructionFailed("Chern class not ample".into()));
    }
    if inv.h2.rank != rank || inv.h2.torsion != torsion {
        return Err(ConstructError::ConstructionFailed(format!(
            "wrong H2: got rank {} torsion {:?}",
            inv.h2.rank, inv.h2.torsion
        )));
    }
    if inv.spin != spin {
        return Err(ConstructError::ConstructionFailed(format!(
            "wrong spin type: got {}",
            inv.spin
        )));
    }
    Ok(cert)
}

// ---------------------------------------------------------------------------
// Rank-one constructions
// ---------------------------------------------------------------------------

/// Rank-one construction over CP1 x CP1 with divisors 2 H1 + (g_i + 1) H2.
/// All multiplicities odd: spin, forced. One even multiplicity (its genus
/// must be even): both spin types, selected by the parity of the H1
/// coefficient of the background class.
pub fn construct_sums1(
    pairs: &[(u64, u64)],
    spin: bool,
) -> Result<SeifertCertificate, ConstructError> {
    check_pairs(pairs)?;
    if pairs.is_empty() {
        return Err(pre("rank-one construction needs at least one torsion pair"));
    }
    let lat = SurfaceLattice::cp1xcp1();
    let m = lcm_of(pairs) as i64;
    let moduli: Vec<u64> = pairs.iter().map(|&(mi, _)| mi).collect();
    let big: Vec<i64> = moduli.iter().map(|&mi| m / mi as i64).collect();
    let all_odd = moduli.iter().all(|&mi| mi % 2 == 1);

    let (b, beta1, a1) = if all_odd {
        if !spin {
            // This route always yields a spin total space; non-spin targets
            // go through the blown-up route instead.
            return Err(ConstructError::SpinTargetUnreachable);
        }
        let coeffs: Vec<i64> = big.iter().map(|&mi| 2 * mi).collect();
        let sol = solve_linear_combination(&coeffs, &moduli, m, 1)
            .ok_or_else(|| ConstructError::ConstructionFailed("no orbit invariants".into()))?;
        (sol.b, sol.beta, 1i64)
    } else {
        for &(mi, gi) in pairs {
            if mi % 2 == 0 && gi % 2 == 1 {
                return Err(pre(format!(
                    "even multiplicity {mi} requires even genus on this route"
                )));
            }
        }
        let sol = solve_linear_combination(&big, &moduli, m, 1)
            .ok_or_else(|| ConstructError::ConstructionFailed("no orbit invariants".into()))?;
        let u: i64 = big.iter().zip(&sol.b).map(|(&mi, &bi)| mi * bi as i64).sum();
        let beta1 = i64::from(!spin);
        (sol.b, beta1, m * beta1 + 2 * u)
    };

    let s2: i64 = pairs
        .iter()
        .zip(&big)
        .zip(&b)
        .map(|((&(_, gi), &mi), &bi)| (gi as i64 + 1) * mi * bi as i64)
        .sum();
    let mut beta2 = min_beta(m, s2);
    loop {
        let a2 = m * beta2 + s2;
        if a2 >= 1 && a1.gcd(&a2) == 1 {
            break;
        }
        beta2 += 1;
        if beta2 - min_beta(m, s2) > BETA_SEARCH_CAP {
            return Err(ConstructError::ConstructionFailed(
                "no coprime ample Chern class found".into(),
            ));
        }
    }

    let divisors = pairs
        .iter()
        .zip(&b)
        .map(|(&(mi, gi), &bi)| OrbitDivisor {
            cls: DivisorClass::new(vec![2, gi as i64 + 1]),
            m: mi,
            b: bi,
            genus: gi as i64,
        })
        .collect();
    let cert = SeifertCertificate {
        surface: lat,
        divisors,
        bclass: DivisorClass::new(vec![beta1, beta2]),
        assumptions: Assumptions::ALL,
    };
    verified(cert, 1, &expected_torsion(pairs), spin)
}

/// Rank-one construction over the one-point blow-up of CP2 with divisors
/// d_i H - (d_i - 2) E, d_i = g_i + 2. All multiplicities odd: non-spin,
/// forced. One even multiplicity (its genus must be odd): both spin types,
/// selected by the parity of beta1 - beta2.
pub fn construct_sums2(
    pairs: &[(u64, u64)],
    spin: bool,
) -> Result<SeifertCertificate, ConstructError> {
    check_pairs(pairs)?;
    if pairs.is_empty() {
        return Err(pre("rank-one construction needs at least one torsion pair"));
    }
    let lat = SurfaceLattice::blow_up(1);
    let m = lcm_of(pairs) as i64;
    let moduli: Vec<u64> = pairs.iter().map(|&(mi, _)| mi).collect();
    let big: Vec<i64> = moduli.iter().map(|&mi| m / mi as i64).collect();
    let all_odd = moduli.iter().all(|&mi| mi % 2 == 1);

    // delta = beta1 - beta2 and b are fixed first; a1 - a2 = m*delta + s
    // with s = sum 2 M_i b_i is then constant while beta2 varies.
    let (b, delta) = if all_odd {
        if spin {
            return Err(ConstructError::SpinTargetUnreachable);
        }
        let coeffs: Vec<i64> = big.iter().map(|&mi| 2 * mi).collect();
        let sol = solve_linear_combination(&coeffs, &moduli, m, 1)
            .ok_or_else(|| ConstructError::ConstructionFailed("no orbit invariants".into()))?;
        (sol.b, sol.beta)
    } else {
        for &(mi, gi) in pairs {
            if mi % 2 == 0 && gi % 2 == 0 {
                return Err(pre(format!(
                    "even multiplicity {mi} requires odd genus on this route"
                )));
            }
        }
        let sol = solve_linear_combination(&big, &moduli, m, 1)
            .ok_or_else(|| ConstructError::ConstructionFailed("no orbit invariants".into()))?;
        (sol.b, i64::from(!spin))
    };

    let s_h: i64 = pairs
        .iter()
        .zip(&big)
        .zip(&b)
        .map(|((&(_, gi), &mi), &bi)| (gi as i64 + 2) * mi * bi as i64)
        .sum();
    let s_e: i64 = pairs
        .iter()
        .zip(&big)
        .zip(&b)
        .map(|((&(_, gi), &mi), &bi)| gi as i64 * mi * bi as i64)
        .sum();
    let gap = m * delta + (s_h - s_e); // a1 - a2, positive in both cases
    let mut beta2 = min_beta(m, s_e);
    loop {
        let a2 = m * beta2 + s_e;
        if a2 >= 1 && a2.gcd(&(a2 + gap)) == 1 {
            break;
        }
        beta2 += 1;
        if beta2 - min_beta(m, s_e) > BETA_SEARCH_CAP {
            return Err(ConstructError::ConstructionFailed(
                "no coprime ample Chern class found".into(),
            ));
        }
    }
    let beta1 = beta2 + delta;

    let divisors = pairs
        .iter()
        .zip(&b)
        .map(|(&(mi, gi), &bi)| OrbitDivisor {
            cls: DivisorClass::new(vec![gi as i64 + 2, -(gi as i64)]),
            m: mi,
            b: bi,
            genus: gi as i64,
        })
        .collect();
    let cert = SeifertCertificate {
        surface: lat,
        divisors,
        bclass: DivisorClass::new(vec![beta1, -beta2]),
        assumptions: Assumptions::ALL,
    };
    verified(cert, 1, &expected_torsion(pairs), spin)
}

/// Dispatches a rank-one request to the route that can realize its spin
/// type; both spin types are reachable for every valid request.
pub fn construct_rank_one(req: &RankOneRequest) -> Result<SeifertCertificate, ConstructError> {
    check_pairs(&req.pairs)?;
    if req.pairs.is_empty() {
        return Err(pre("rank-one construction needs at least one torsion pair"));
    }
    match req.pairs.iter().find(|&&(m, _)| m % 2 == 0) {
        None => {
            if req.spin {
                construct_sums1(&req.pairs, true)
            } else {
                construct_sums2(&req.pairs, false)
            }
        }
        Some(&(_, g)) => {
            if g % 2 == 0 {
                construct_sums1(&req.pairs, req.spin)
            } else {
                construct_sums2(&req.pairs, req.spin)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Rank-zero construction over CP2
// ---------------------------------------------------------------------------

/// Rank-zero construction: divisors d_i H on CP2 with g_i = (d_i-1)(d_i-2)/2
/// triangular and gcd(m_i, d_i) = 1. The total space is a rational homology
/// sphere and is always spin.
pub fn construct_sphere(req: &SphereRequest) -> Result<SeifertCertificate, ConstructError> {
    check_pairs(&req.parts)?;
    let lat = SurfaceLattice::cp2();
    let mut degrees = Vec::with_capacity(req.parts.len());
    for &(mi, gi) in &req.parts {
        let d = is_triangular(gi)
            .ok_or_else(|| pre(format!("genus {gi} is not of the form (d-1)(d-2)/2")))?;
        if mi.gcd(&d) != 1 {
            return Err(pre(format!("degree {d} shares a factor with multiplicity {mi}")));
        }
        degrees.push(d as i64);
    }
    let m = lcm_of(&req.parts) as i64;
    let moduli: Vec<u64> = req.parts.iter().map(|&(mi, _)| mi).collect();
    let coeffs: Vec<i64> = moduli
        .iter()
        .zip(&degrees)
        .map(|(&mi, &d)| (m / mi as i64) * d)
        .collect();
    let sol = solve_linear_combination(&coeffs, &moduli, m, 1)
        .ok_or_else(|| ConstructError::ConstructionFailed("no orbit invariants".into()))?;

    let divisors = req
        .parts
        .iter()
        .zip(&degrees)
        .zip(&sol.b)
        .map(|((&(mi, gi), &d), &bi)| OrbitDivisor {
            cls: DivisorClass::new(vec![d]),
            m: mi,
            b: bi,
            genus: gi as i64,
        })
        .collect();
    let cert = SeifertCertificate {
        surface: lat,
        divisors,
        bclass: DivisorClass::new(vec![sol.beta]),
        assumptions: Assumptions::ALL,
    };
    verified(cert, 0, &expected_torsion(&req.parts), true)
}

// ---------------------------------------------------------------------------
// Regular (torsion-free) constructions
// ---------------------------------------------------------------------------

/// Torsion-free construction with empty isotropy: a circle bundle over CP2
/// (rank 0) or over the rank-point blow-up of CP2.
pub fn construct_regular(rank: u32, spin: bool) -> Result<SeifertCertificate, ConstructError> {
    let cert = if rank == 0 {
        if !spin {
            return Err(pre("rank 0 torsion-free non-spin is not realizable"));
        }
        SeifertCertificate {
            surface: SurfaceLattice::cp2(),
            divisors: vec![],
            bclass: DivisorClass::new(vec![1]),
            assumptions: Assumptions::ALL,
        }
    } else {
        let a = if spin { 2 * rank as i64 + 1 } else { 2 * rank as i64 };
        let mut coeffs = vec![a];
        coeffs.extend(std::iter::repeat_n(-1, rank as usize));
        SeifertCertificate {
            surface: SurfaceLattice::blow_up(rank),
            divisors: vec![],
            bclass: DivisorClass::new(coeffs),
            assumptions: Assumptions::ALL,
        }
    };
    verified(cert, rank, &[], spin)
}

/// The diffeomorphism type realized by `construct_regular`:
/// #rank (S^2 x S^3) when spin, X_inf # (rank-1)(S^2 x S^3) otherwise.
pub fn regular_diffeo_name(rank: u32, spin: bool) -> Result<crate::abelian::BardenName, ConstructError> {
    use crate::abelian::{BardenIndex, BardenName};
    if spin {
        Ok(BardenName { j: BardenIndex::Finite(0), chain: vec![], r: rank })
    } else if rank >= 1 {
        Ok(BardenName { j: BardenIndex::Infinity, chain: vec![], r: rank - 1 })
    } else {
        Err(pre("rank 0 torsion-free non-spin is not realizable"))
    }
}

// ---------------------------------------------------------------------------
// Rank-raising blow-up
// ---------------------------------------------------------------------------

/// Embeds a class of the old surface into the blow-up lattice. For the
/// quadric this is the isometry H1 -> H - E1, H2 -> H - E2 onto the
/// two-point blow-up of CP2; the other kinds extend by zero.
fn embed_class(kind: SurfaceKind, cls: &DivisorClass) -> DivisorClass {
    match kind {
        SurfaceKind::Cp2 | SurfaceKind::BlowUp(_) => {
            let mut c = cls.coeffs.clone();
            c.push(0);
            DivisorClass::new(c)
        }
        SurfaceKind::Cp1xCp1 => {
            let (a1, a2) = (cls.coeffs[0], cls.coeffs[1]);
            DivisorClass::new(vec![a1 + a2, -a1, -a2])
        }
    }
}

fn blown_up(kind: SurfaceKind) -> (SurfaceKind, DivisorClass) {
    match kind {
        SurfaceKind::Cp2 => (SurfaceKind::BlowUp(1), DivisorClass::new(vec![0, 1])),
        SurfaceKind::Cp1xCp1 => {
            (SurfaceKind::BlowUp(2), DivisorClass::new(vec![1, -1, -1]))
        }
        SurfaceKind::BlowUp(k) => {
            let mut c = vec![0; k as usize + 2];
            c[k as usize + 1] = 1;
            (SurfaceKind::BlowUp(k + 1), DivisorClass::new(c))
        }
    }
}

/// Blows up the base at a point off the isotropy divisors, raising the
/// rank of H2 by one while preserving the torsion. The orbit invariants
/// become N b_i mod m_i for a scaling N coprime to lcm(m_i); the spin type
/// of the new total space is steered by the parity of N and by how many
/// copies of the exceptional class are subtracted from the polarization.
///
/// A spin input can be raised to either spin type; a non-spin input can
/// only stay non-spin (the obstruction persists under blow-up), in which
/// case a spin target yields `SpinTargetUnreachable`.
pub fn blowup_raise_rank(
    cert: &SeifertCertificate,
    spin: bool,
) -> Result<SeifertCertificate, ConstructError> {
    let old = cert.invariants()?;
    let (new_kind, e_new) = blown_up(cert.surface.kind);
    let new_lat = SurfaceLattice::new(new_kind);
    let m = cert.multiplicity_lcm();
    let n_cap = 4 * m as i64 + 64;
    let mut other_spin_reachable = false;

    for n in 2..=n_cap {
        if (n as u64).gcd(&m) != 1 {
            continue;
        }
        for twist in [1i64, 2] {
            let mut divisors = Vec::with_capacity(cert.divisors.len());
            let mut bclass = embed_class(cert.surface.kind, &cert.bclass).scaled(n);
            for d in &cert.divisors {
                let cls = embed_class(cert.surface.kind, &d.cls);
                let b_hat = (n as u64 % d.m * d.b) % d.m;
                let q = (n * d.b as i64 - b_hat as i64) / d.m as i64;
                bclass = bclass.add(&cls.scaled(q));
                divisors.push(OrbitDivisor { cls, m: d.m, b: b_hat, genus: d.genus });
            }
            bclass = bclass.sub(&e_new.scaled(twist));
            let cand = SeifertCertificate {
                surface: new_lat.clone(),
                divisors,
                bclass,
                assumptions: cert.assumptions,
            };
            if cand.validate().is_err() {
                continue;
            }
            if !matches!(cand.h1_vanishes(), Ok(true)) {
                continue;
            }
            if !cand.kahler_positive()? {
                continue;
            }
            let inv = cand.invariants()?;
            if inv.h2.rank != old.h2.rank + 1 || inv.h2.torsion != old.h2.torsion {
                continue;
            }
            if inv.spin == spin {
                return Ok(cand);
            }
            other_spin_reachable = true;
        }
    }
    if other_spin_reachable {
        Err(ConstructError::SpinTargetUnreachable)
    } else {
        Err(ConstructError::ConstructionFailed(
            "no valid blow-up polarization found".into(),
        ))
    }
}
