//! Decision procedures: given target H2 data, decide whether a
//! (semi-regular) Sasakian structure exists, producing either a verified
//! certificate, a named obstruction, or an honest Unknown.

use crate::abelian::{
    gk_check, is_triangular, kollar_obstruction, barden_normal_form, Barden, GkClause, H2Data,
    NotRealizable,
};
use crate::construct::{
    blowup_raise_rank, construct_regular, construct_rank_one, construct_sphere, RankOneRequest,
    SphereRequest,
};
use crate::seifert::SeifertCertificate;
use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecideError {
    #[error("this procedure applies to rank 0 only, got rank {0}")]
    RankNotZero(u32),
}

/// A named reason why no structure can exist.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Obstruction {
    #[error("{0}")]
    Gk(GkClause),
    #[error("torsion does not pair into a Barden normal form: {0}")]
    Pairing(NotRealizable),
    #[error("more than 10 torsion parts have non-triangular half-count: {0:?}")]
    KollarExcess(Vec<(u64, u32, u64)>),
    #[error("part Z_{p}^{e} occurs {c} times; {c}/2 is not of the form (d-1)(d-2)/2")]
    NonTriangularGenus { p: u64, e: u32, c: u64 },
    #[error("part Z_{p}^{e} needs a degree-{d} curve, but gcd({p}, {d}) != 1")]
    DegreeSharesFactor { p: u64, e: u32, d: u64 },
    #[error("a rational homology sphere admitting such a structure must be spin")]
    SpinRequired,
    #[error("torsion width t({p}) >= 2 is an obstruction at rank 0")]
    TorsionWidth { p: u64 },
}

#[derive(Debug)]
pub enum Verdict {
    /// Existence, witnessed by a certificate the verifier confirms.
    Yes(Box<SeifertCertificate>),
    /// Non-existence, witnessed by a named obstruction.
    No(Obstruction),
    /// Outside the decidable range.
    Unknown(String),
}

/// A verdict together with the reasoning steps that led to it.
#[derive(Debug)]
pub struct Decision {
    pub verdict: Verdict,
    pub trace: Vec<String>,
}

impl Decision {
    fn yes(cert: SeifertCertificate, trace: Vec<String>) -> Self {
        Decision { verdict: Verdict::Yes(Box::new(cert)), trace }
    }

    fn no(o: Obstruction, mut trace: Vec<String>) -> Self {
        trace.push(format!("obstruction: {o}"));
        Decision { verdict: Verdict::No(o), trace }
    }

    fn unknown(reason: impl Into<String>, mut trace: Vec<String>) -> Self {
        let reason = reason.into();
        trace.push(format!("unknown: {reason}"));
        Decision { verdict: Verdict::Unknown(reason), trace }
    }
}

/// Prime-power torsion parts (p, e, count) flattened from the primary
/// decomposition.
fn primary_parts(h: &H2Data) -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    for (p, exps) in h.primary_decomposition() {
        for (e, c) in exps {
            out.push((p, e, c));
        }
    }
    out
}

/// Decides existence of a Sasakian structure with the given H2 data.
pub fn decide_sasakian(h: &H2Data) -> Decision {
    let mut trace = vec![format!(
        "input: rank {}, {} torsion summand kinds, barden {}",
        h.rank,
        h.torsion.len(),
        h.barden
    )];

    if let Err(clause) = gk_check(h) {
        return Decision::no(Obstruction::Gk(clause), trace);
    }
    trace.push("necessary divisibility/width conditions hold".into());

    let names = match barden_normal_form(h) {
        Ok(names) => names,
        Err(nr) => return Decision::no(Obstruction::Pairing(nr), trace),
    };
    trace.push(format!(
        "normal form(s): {}",
        names.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ")
    ));

    let spin = h.barden == Barden::ZERO;

    if h.torsion.is_empty() {
        trace.push(format!("torsion-free: regular construction, rank {}", h.rank));
        return match construct_regular(h.rank, spin) {
            Ok(cert) => Decision::yes(cert, trace),
            Err(e) => Decision::unknown(format!("regular construction failed: {e}"), trace),
        };
    }

    let (_, t_max) = h.t_invariants();

    if h.rank >= 1 {
        if t_max > 1 {
            return Decision::unknown(
                "torsion width >= 2 with positive rank is outside the constructive range",
                trace,
            );
        }
        let pairs: Vec<(u64, u64)> = primary_parts(h)
            .into_iter()
            .map(|(p, e, c)| (p.pow(e), c / 2))
            .collect();
        trace.push(format!("rank-one construction for pairs {pairs:?}, spin {spin}"));
        let mut cert = match construct_rank_one(&RankOneRequest { pairs, spin }) {
            Ok(cert) => cert,
            Err(e) => {
                return Decision::unknown(format!("rank-one construction failed: {e}"), trace)
            }
        };
        for step in 2..=h.rank {
            trace.push(format!("blow-up: raising rank to {step}"));
            cert = match blowup_raise_rank(&cert, spin) {
                Ok(cert) => cert,
                Err(e) => {
                    return Decision::unknown(format!("blow-up step failed: {e}"), trace)
                }
            };
        }
        return Decision::yes(cert, trace);
    }

    // rank 0 with torsion; spin holds (barden infinity was rejected above)
    match kollar_obstruction(h).expect("rank 0") {
        Err(parts) => return Decision::no(Obstruction::KollarExcess(parts), trace),
        Ok(()) => trace.push("at most 10 parts have non-triangular half-count".into()),
    }
    let sphere = decide_semiregular_sphere(h).expect("rank 0");
    trace.extend(sphere.trace.iter().cloned());
    match sphere.verdict {
        Verdict::Yes(cert) => Decision { verdict: Verdict::Yes(cert), trace },
        _ => Decision::unknown(
            "no semi-regular certificate; the quasi-regular case is undecided here",
            trace,
        ),
    }
}

/// Total dichotomy for semi-regular structures on rational homology
/// spheres: every input gets a certificate or a named obstruction.
pub fn decide_semiregular_sphere(h: &H2Data) -> Result<Decision, DecideError> {
    if h.rank != 0 {
        return Err(DecideError::RankNotZero(h.rank));
    }
    let mut trace = vec!["rank 0: rational homology sphere dichotomy".into()];

    if h.barden != Barden::ZERO {
        return Ok(Decision::no(Obstruction::SpinRequired, trace));
    }
    let parts = primary_parts(h);
    for i in 1..parts.len() {
        if parts[i].0 == parts[i - 1].0 {
            return Ok(Decision::no(Obstruction::TorsionWidth { p: parts[i].0 }, trace));
        }
    }
    let mut request = Vec::with_capacity(parts.len());
    for (p, e, c) in parts {
        if c % 2 != 0 {
            return Ok(Decision::no(
                Obstruction::Pairing(NotRealizable::UnpairedFactor(p.pow(e))),
                trace,
            ));
        }
        let g = c / 2;
        let d = match is_triangular(g) {
            Some(d) => d,
            None => {
                return Ok(Decision::no(Obstruction::NonTriangularGenus { p, e, c }, trace))
            }
        };
        if p.gcd(&d) != 1 {
            return Ok(Decision::no(Obstruction::DegreeSharesFactor { p, e, d }, trace));
        }
        trace.push(format!("part Z_{p}^{e} x{c}: degree {d} curve, gcd({p}, {d}) = 1"));
        request.push((p.pow(e), g));
    }
    match construct_sphere(&SphereRequest { parts: request }) {
        Ok(cert) => Ok(Decision::yes(cert, trace)),
        Err(e) => Ok(Decision::unknown(format!("sphere construction failed: {e}"), trace)),
    }
}

/// Membership in the table of torsion groups known to occur for structures
/// of positive curvature type: trivial, (Z_m)^2, (Z_5)^4, (Z_4)^4,
/// (Z_3)^4, (Z_3)^6, (Z_3)^8, and (Z_2)^{2n}.
pub fn positive_table_member(h: &H2Data) -> bool {
    let pd = h.primary_decomposition();
    if pd.is_empty() {
        return true;
    }
    // (Z_m)^2 for some m: every prime occurs with one exponent, count 2
    if pd.values().all(|exps| exps.len() == 1 && exps.values().all(|&c| c == 2)) {
        return true;
    }
    // the remaining entries are p-groups with a single exponent
    if pd.len() != 1 {
        return false;
    }
    let (&p, exps) = pd.iter().next().unwrap();
    if exps.len() != 1 {
        return false;
    }
    let (&e, &c) = exps.iter().next().unwrap();
    matches!((p, e, c), (5, 1, 4) | (2, 2, 4) | (3, 1, 4) | (3, 1, 6) | (3, 1, 8))
        || (p == 2 && e == 1 && c % 2 == 0)
}

/// Decides existence of a negative structure on a rational homology
/// sphere: a semi-regular certificate outside the positive table proves
/// existence; inside the table, or without a certificate, the answer is
/// unknown.
pub fn decide_negative_sasakian(h: &H2Data) -> Result<Decision, DecideError> {
    let sphere = decide_semiregular_sphere(h)?;
    let mut trace = sphere.trace;
    match sphere.verdict {
        Verdict::Yes(cert) => {
            if positive_table_member(h) {
                Ok(Decision::unknown(
                    "the torsion group appears in the positive table; the structure type is not pinned down",
                    trace,
                ))
            } else {
                trace.push("torsion group is outside the positive table".into());
                Ok(Decision { verdict: Verdict::Yes(cert), trace })
            }
        }
        _ => Ok(Decision::unknown(
            "no semi-regular certificate to build on",
            trace,
        )),
    }
}

/// Per-part data of the K-contact necessary condition at rank 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KContactReport {
    /// (p, e, count, degree d with count/2 = (d-1)(d-2)/2, if any).
    pub parts: Vec<(u64, u32, u64, Option<u64>)>,
    /// All parts satisfy gcd(p, d) = 1.
    pub degree_branch: bool,
    /// All parts satisfy gcd(p, d + 3) = 1.
    pub shifted_branch: bool,
}

impl KContactReport {
    /// The necessary condition holds iff one branch holds for every part.
    pub fn passes(&self) -> bool {
        self.degree_branch || self.shifted_branch
    }
}

/// Necessary condition for a K-contact structure on a rational homology
/// sphere: counts pair into triangular halves, and one of the two gcd
/// branches holds uniformly.
pub fn kcontact_sphere_necessary(h: &H2Data) -> Result<KContactReport, DecideError> {
    if h.rank != 0 {
        return Err(DecideError::RankNotZero(h.rank));
    }
    let mut parts = Vec::new();
    let mut degree_branch = true;
    let mut shifted_branch = true;
    for (p, e, c) in primary_parts(h) {
        let d = if c % 2 == 0 { is_triangular(c / 2) } else { None };
        match d {
            Some(d) => {
                degree_branch &= p.gcd(&d) == 1;
                shifted_branch &= p.gcd(&(d + 3)) == 1;
            }
            None => {
                degree_branch = false;
                shifted_branch = false;
            }
        }
        parts.push((p, e, c, d));
    }
    Ok(KContactReport { parts, degree_branch, shifted_branch })
}
