//! Intersection lattices of the three base surfaces, with exact integer
//! arithmetic: adjunction genus, divisibility, ampleness cones and the
//! GF(2) linear algebra backing the w2 computation.

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("divisor class has {got} coefficients, lattice has rank {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("K.D + D^2 = {0} is odd; class not representable by a smooth connected curve")]
    NonIntegralGenus(i64),
}

/// The base surface kinds used by the constructions: the projective plane,
/// the quadric, and the plane blown up at k points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    Cp2,
    Cp1xCp1,
    BlowUp(u32),
}

impl std::fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SurfaceKind::Cp2 => write!(f, "CP2"),
            SurfaceKind::Cp1xCp1 => write!(f, "CP1xCP1"),
            SurfaceKind::BlowUp(k) => write!(f, "BlowUp({k})"),
        }
    }
}

/// An integer class in the fixed basis of a surface lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<i64>) -> Self {
        DivisorClass { coeffs }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass { coeffs: vec![0; rank] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scaled(&self, n: i64) -> Self {
        DivisorClass { coeffs: self.coeffs.iter().map(|c| c * n).collect() }
    }

    pub fn add(&self, other: &DivisorClass) -> Self {
        assert_eq!(self.len(), other.len(), "class length mismatch");
        DivisorClass {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &DivisorClass) -> Self {
        assert_eq!(self.len(), other.len(), "class length mismatch");
        DivisorClass {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    /// gcd of the coefficients; 0 for the zero class. This is the lattice
    /// divisibility because every basis here is a basis of a unimodular
    /// torsion-free lattice.
    pub fn divisibility(&self) -> u64 {
        self.coeffs
            .iter()
            .fold(0u64, |g, &c| g.gcd(&(c.unsigned_abs())))
    }

    /// Coefficients reduced mod 2, packed little-endian into a bit mask.
    pub fn mod2_mask(&self) -> u64 {
        assert!(self.len() <= 64);
        self.coeffs
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &c)| m | (((c & 1) as u64) << i))
    }
}

/// A rational second-cohomology class, stored in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalClass {
    pub numerator: DivisorClass,
    pub denominator: u64,
}

impl RationalClass {
    /// Reduces so that gcd(denominator, content of numerator) = 1.
    pub fn new(numerator: DivisorClass, denominator: u64) -> Self {
        assert!(denominator > 0, "denominator must be positive");
        let g = numerator.divisibility().gcd(&denominator);
        if g <= 1 {
            return RationalClass { numerator, denominator };
        }
        RationalClass {
            numerator: DivisorClass::new(
                numerator.coeffs.iter().map(|c| c / g as i64).collect(),
            ),
            denominator: denominator / g,
        }
    }
}

/// A fixed-basis unimodular intersection lattice with canonical class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceLattice {
    pub kind: SurfaceKind,
    gram: Vec<Vec<i64>>,
    canonical: DivisorClass,
}

impl SurfaceLattice {
    pub fn new(kind: SurfaceKind) -> Self {
        let (gram, canonical) = match kind {
            SurfaceKind::Cp2 => (vec![vec![1]], DivisorClass::new(vec![-3])),
            SurfaceKind::Cp1xCp1 => (
                vec![vec![0, 1], vec![1, 0]],
                DivisorClass::new(vec![-2, -2]),
            ),
            SurfaceKind::BlowUp(k) => {
                let n = 1 + k as usize;
                let mut gram = vec![vec![0i64; n]; n];
                gram[0][0] = 1;
                for (i, row) in gram.iter_mut().enumerate().skip(1) {
                    row[i] = -1;
                }
                let mut kx = vec![1i64; n];
                kx[0] = -3;
                (gram, DivisorClass::new(kx))
            }
        };
        let lat = SurfaceLattice { kind, gram, canonical };
        let det = lat.gram_det();
        debug_assert!(det == 1 || det == -1, "gram must be unimodular, det={det}");
        lat
    }

    pub fn cp2() -> Self {
        Self::new(SurfaceKind::Cp2)
    }

    pub fn cp1xcp1() -> Self {
        Self::new(SurfaceKind::Cp1xCp1)
    }

    pub fn blow_up(k: u32) -> Self {
        assert!(k >= 1);
        Self::new(SurfaceKind::BlowUp(k))
    }

    pub fn b2(&self) -> usize {
        self.gram.len()
    }

    pub fn basis_labels(&self) -> Vec<String> {
        match self.kind {
            SurfaceKind::Cp2 => vec!["H".to_string()],
            SurfaceKind::Cp1xCp1 => vec!["H1".to_string(), "H2".to_string()],
            SurfaceKind::BlowUp(k) => {
                let mut v = vec!["H".to_string()];
                v.extend((1..=k).map(|i| format!("E{i}")));
                v
            }
        }
    }

    pub fn canonical_class(&self) -> &DivisorClass {
        &self.canonical
    }

    /// The basis class with a single 1 at position `i`.
    pub fn basis_class(&self, i: usize) -> DivisorClass {
        assert!(i < self.b2());
        let mut c = vec![0; self.b2()];
        c[i] = 1;
        DivisorClass::new(c)
    }

    fn check(&self, d: &DivisorClass) -> Result<(), LatticeError> {
        if d.len() != self.b2() {
            return Err(LatticeError::RankMismatch { expected: self.b2(), got: d.len() });
        }
        Ok(())
    }

    /// Integer determinant of the gram matrix (Bareiss elimination).
    pub fn gram_det(&self) -> i64 {
        let n = self.gram.len();
        let mut m: Vec<Vec<i64>> = self.gram.clone();
        let mut prev = 1i64;
        let mut sign = 1i64;
        for k in 0..n.saturating_sub(1) {
            if m[k][k] == 0 {
                let swap = (k + 1..n).find(|&i| m[i][k] != 0);
                match swap {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
                m[i][k] = 0;
            }
            prev = m[k][k];
        }
        sign * m[n - 1][n - 1]
    }

    /// The intersection pairing a . b.
    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        let mut s = 0i64;
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                s += ai * self.gram[i][j] * bj;
            }
        }
        Ok(s)
    }

    pub fn self_intersection(&self, d: &DivisorClass) -> Result<i64, LatticeError> {
        self.intersect(d, d)
    }

    /// Adjunction genus g = (K.D + D^2 + 2) / 2.
    pub fn adjunction_genus(&self, d: &DivisorClass) -> Result<i64, LatticeError> {
        let kd = self.intersect(&self.canonical, d)?;
        let dd = self.intersect(d, d)?;
        let s = kd + dd;
        if s.rem_euclid(2) != 0 {
            return Err(LatticeError::NonIntegralGenus(s));
        }
        Ok((s + 2) / 2)
    }

    /// w2(X) as an integral representative: the canonical class mod 2.
    pub fn w2(&self) -> DivisorClass {
        DivisorClass::new(self.canonical.coeffs.iter().map(|c| c.rem_euclid(2)).collect())
    }

    /// Sufficient ampleness cone, per surface kind. On the blow-ups this is
    /// the cone b_i > 0, a > sum b_i for D = aH - sum b_i E_i; classes
    /// outside it are treated as not-certified-ample.
    pub fn is_ample(&self, d: &DivisorClass) -> bool {
        if d.len() != self.b2() {
            return false;
        }
        match self.kind {
            SurfaceKind::Cp2 => d.coeffs[0] > 0,
            SurfaceKind::Cp1xCp1 => d.coeffs[0] > 0 && d.coeffs[1] > 0,
            SurfaceKind::BlowUp(_) => {
                let a = d.coeffs[0];
                let bs: Vec<i64> = d.coeffs[1..].iter().map(|&c| -c).collect();
                bs.iter().all(|&b| b > 0) && a > bs.iter().sum::<i64>()
            }
        }
    }

    /// True iff v mod 2 lies in the GF(2)-span of the generators mod 2.
    pub fn f2_span_membership(
        &self,
        v: &DivisorClass,
        generators: &[DivisorClass],
    ) -> Result<bool, LatticeError> {
        self.check(v)?;
        for g in generators {
            self.check(g)?;
        }
        let mut basis: Vec<u64> = Vec::new();
        for g in generators {
            reduce_insert(&mut basis, g.mod2_mask());
        }
        let mut x = v.mod2_mask();
        for &b in &basis {
            let pivot = 63 - b.leading_zeros();
            if x >> pivot & 1 == 1 {
                x ^= b;
            }
        }
        Ok(x == 0)
    }

    /// GF(2) rank of the coefficient matrix of the generators mod 2.
    pub fn f2_rank(&self, generators: &[DivisorClass]) -> Result<usize, LatticeError> {
        for g in generators {
            self.check(g)?;
        }
        let mut basis: Vec<u64> = Vec::new();
        for g in generators {
            reduce_insert(&mut basis, g.mod2_mask());
        }
        Ok(basis.len())
    }
}

fn reduce_insert(basis: &mut Vec<u64>, mut x: u64) {
    for &b in basis.iter() {
        let pivot = 63 - b.leading_zeros();
        if x >> pivot & 1 == 1 {
            x ^= b;
        }
    }
    if x != 0 {
        basis.push(x);
    }
}
