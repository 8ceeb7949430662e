//! Brute-force checks of the order properties inside the finite quotients
//! `O_K/(M)`. Nothing here uses `L(n, d)`, the unit index or the inert-prime
//! rule; the point is to test those against direct enumeration.

use std::fmt;

use crate::arith::{self, gcd};
use crate::classify::FieldData;
use crate::error::{Error, Result};
use crate::pell::FundamentalUnit;
use crate::quadfield::{is_one, FieldContext, ModQuadInt, SplitKind};

/// Largest modulus the enumerations accept.
pub const MAX_MODULUS: u64 = 200;

fn check_bound(modulus: u64) -> Result<()> {
    if modulus > MAX_MODULUS {
        return Err(Error::BoundExceeded {
            modulus,
            bound: MAX_MODULUS,
        });
    }
    if modulus < 2 {
        return Err(Error::ModulusTooSmall(modulus));
    }
    Ok(())
}

/// All `M²` residues of `O_K/(M)`.
#[derive(Copy, Clone, Debug)]
pub struct QuotientRing {
    pub field: FieldContext,
    pub modulus: u64,
}

impl QuotientRing {
    pub fn new(field: FieldContext, modulus: u64) -> Result<Self> {
        check_bound(modulus)?;
        Ok(QuotientRing { field, modulus })
    }

    pub fn elements(&self) -> impl Iterator<Item = ModQuadInt> + '_ {
        let m = self.modulus;
        (0..m).flat_map(move |a| (0..m).map(move |b| ModQuadInt { a, b, modulus: m }))
    }

    fn index(&self, x: ModQuadInt) -> usize {
        (x.a * self.modulus + x.b) as usize
    }

    /// A residue is a unit iff its norm is invertible mod `M`.
    pub fn is_unit(&self, x: ModQuadInt) -> bool {
        gcd(self.field.mod_norm(x), self.modulus) == 1
    }

    pub fn units(&self) -> impl Iterator<Item = ModQuadInt> + '_ {
        self.elements().filter(move |&x| self.is_unit(x))
    }

    /// `u, u², …` up to and including the first return to `1`.
    fn cyclic_powers(&self, u: ModQuadInt) -> Result<Vec<ModQuadInt>> {
        let mut out = vec![ModQuadInt::one(self.modulus)?];
        let mut x = u;
        while !is_one(&x) {
            out.push(x);
            if out.len() as u64 > self.modulus * self.modulus {
                return Err(Error::Internal(format!(
                    "{u:?} is not a unit of O/({})",
                    self.modulus
                )));
            }
            x = self.field.mod_mul(x, u);
        }
        Ok(out)
    }
}

pub fn quotient_unit_count(field: &FieldContext, modulus: u64) -> Result<u64> {
    let q = QuotientRing::new(*field, modulus)?;
    Ok(q.units().count() as u64)
}

/// Least `k ≥ 1` with `u^k` in `Z + nO_K`, by stepping through `u^k mod n`.
pub fn direct_min_power(field: &FieldContext, unit: &FundamentalUnit, n: u64) -> Result<u64> {
    if n == 1 {
        return Ok(1);
    }
    check_bound(n)?;
    let base = unit.u.reduce(n)?;
    let mut x = base;
    for k in 1..=n * n {
        if x.b == 0 {
            return Ok(k);
        }
        x = field.mod_mul(x, base);
    }
    Err(Error::Internal(format!(
        "no power of the unit lies in the index-{n} order"
    )))
}

/// Every coset of `U(O/(n))` modulo the rational units meets a power of the
/// fundamental unit.
pub fn brute_locally_associated(
    field: &FieldContext,
    unit: &FundamentalUnit,
    n: u64,
) -> Result<bool> {
    if n == 1 {
        return Ok(true);
    }
    let q = QuotientRing::new(*field, n)?;
    let powers = q.cyclic_powers(unit.u.reduce(n)?)?;
    let rational_units: Vec<u64> = (1..n).filter(|&z| gcd(z, n) == 1).collect();
    let mut hit = vec![false; (n * n) as usize];
    let mut reached = 0u64;
    for &w in &powers {
        for &z in &rational_units {
            let idx = q.index(w.scale(z));
            if !hit[idx] {
                hit[idx] = true;
                reached += 1;
            }
        }
    }
    Ok(reached == q.units().count() as u64)
}

/// `O/(n) = (Z/n) · ⟨u⟩`: every residue is an integer times a unit power.
pub fn brute_associated(field: &FieldContext, unit: &FundamentalUnit, n: u64) -> Result<bool> {
    if n == 1 {
        return Ok(true);
    }
    let q = QuotientRing::new(*field, n)?;
    let powers = q.cyclic_powers(unit.u.reduce(n)?)?;
    let mut hit = vec![false; (n * n) as usize];
    let mut reached = 0u64;
    for &w in &powers {
        for z in 0..n {
            let idx = q.index(w.scale(z));
            if !hit[idx] {
                hit[idx] = true;
                reached += 1;
            }
        }
    }
    Ok(reached == n * n)
}

/// Full-rank sublattice of `Z²` (coordinates in the basis `(1, ω)`) kept
/// in Hermite normal form: spanned by `(r, 0)` and `(s, t)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    r: i128,
    s: i128,
    t: i128,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

impl Lattice {
    pub fn spanned_by(vectors: &[(i128, i128)]) -> Self {
        let (mut r, mut s, mut t) = (0i128, 0i128, 0i128);
        for &(x, y) in vectors {
            if y == 0 {
                r = gcd_i(r, x);
                continue;
            }
            if t == 0 {
                (s, t) = if y < 0 { (-x, -y) } else { (x, y) };
                continue;
            }
            let (g, alpha, beta) = ext_gcd(y, t);
            let pivot = (alpha * x + beta * s, g);
            // combination with vanishing ω-coordinate
            let eliminated = (t / g) * x - (y / g) * s;
            r = gcd_i(r, eliminated);
            (s, t) = pivot;
        }
        if r != 0 {
            s = s.rem_euclid(r);
        }
        Lattice { r, s, t }
    }

    pub fn contains(&self, a: i128, b: i128) -> bool {
        let rest = if self.t == 0 {
            if b != 0 {
                return false;
            }
            a
        } else {
            if b % self.t != 0 {
                return false;
            }
            a - (b / self.t) * self.s
        };
        if self.r == 0 {
            rest == 0
        } else {
            rest % self.r == 0
        }
    }

    /// Index in `Z²`, i.e. the norm of the ideal.
    pub fn covolume(&self) -> i128 {
        self.r * self.t
    }
}

fn gcd_i(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mul_small(field: &FieldContext, x: (i128, i128), y: (i128, i128)) -> (i128, i128) {
    let tr = field.omega_trace() as i128;
    let nm = field.omega_norm() as i128;
    let bb = x.1 * y.1;
    (x.0 * y.0 - bb * nm, x.0 * y.1 + x.1 * y.0 + bb * tr)
}

/// An ideal of `O_K` given by generators, with its `Z`-lattice.
#[derive(Clone, Debug)]
pub struct Ideal {
    pub generators: Vec<(i128, i128)>,
    pub lattice: Lattice,
}

impl Ideal {
    pub fn generated_by(field: &FieldContext, generators: Vec<(i128, i128)>) -> Self {
        let mut span = Vec::with_capacity(2 * generators.len());
        for &g in &generators {
            span.push(g);
            span.push(mul_small(field, g, (0, 1)));
        }
        let lattice = Lattice::spanned_by(&span);
        Ideal {
            generators,
            lattice,
        }
    }

    pub fn mul(&self, field: &FieldContext, other: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for &g in &self.generators {
            for &h in &other.generators {
                gens.push(mul_small(field, g, h));
            }
        }
        Ideal::generated_by(field, gens)
    }

    pub fn contains(&self, a: i128, b: i128) -> bool {
        self.lattice.contains(a, b)
    }

    pub fn norm(&self) -> i128 {
        self.lattice.covolume()
    }
}

/// A prime of `O_K` above a rational prime dividing the conductor.
#[derive(Clone, Debug)]
pub struct PrimeAbove {
    pub p: u64,
    /// `None` for an inert prime `(p)`, otherwise `r` with `P = (p, ω − r)`.
    pub root: Option<u64>,
    pub ideal: Ideal,
}

impl PrimeAbove {
    /// Membership by the residue map `a + bω ↦ a + br (mod p)`, or
    /// `p | a, p | b` when inert.
    pub fn residue_contains(&self, a: i128, b: i128) -> bool {
        let p = self.p as i128;
        match self.root {
            None => a % p == 0 && b % p == 0,
            Some(r) => (a + b * r as i128).rem_euclid(p) == 0,
        }
    }
}

impl fmt::Display for PrimeAbove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.root {
            None => write!(f, "({})", self.p),
            Some(r) => write!(f, "({}, ω-{})", self.p, r),
        }
    }
}

pub fn primes_above(field: &FieldContext, p: u64) -> Result<Vec<PrimeAbove>> {
    let rep = field.splitting_type(p)?;
    let pi = p as i128;
    Ok(match rep.kind {
        SplitKind::Inert => vec![PrimeAbove {
            p,
            root: None,
            ideal: Ideal::generated_by(field, vec![(pi, 0)]),
        }],
        _ => rep
            .roots
            .iter()
            .map(|&r| PrimeAbove {
                p,
                root: Some(r),
                ideal: Ideal::generated_by(field, vec![(pi, 0), (-(r as i128), 1)]),
            })
            .collect(),
    })
}

/// Residues `a + bω` of `Z + nO_K` modulo `M`: all `a`, and `b` running over
/// the multiples of `gcd(n, M)`.
fn order_residues(n: u64, modulus: u64) -> impl Iterator<Item = (i128, i128)> {
    let step = gcd(n, modulus).max(1);
    (0..modulus).flat_map(move |a| {
        (0..modulus)
            .step_by(step as usize)
            .map(move |b| (a as i128, b as i128))
    })
}

/// For all primes `P₁, P₂` over the conductor: `R ∩ P₁ ⊄ P₁²`, and
/// `R ∩ P₁ ⊄ P₂` when `P₁ ≠ P₂`. Witnesses are searched modulo `p²` and
/// modulo `lcm(p₁, p₂)` respectively, which is enough since `P₁² ⊇ (p₁²)`
/// and `P_i ⊇ (p_i)`.
pub fn brute_ideal_preserving(field: &FieldContext, n: u64) -> Result<bool> {
    if n == 1 {
        return Ok(true);
    }
    check_bound(n)?;
    let mut primes = Vec::new();
    for (p, _) in arith::factorize(n)?.iter() {
        primes.extend(primes_above(field, p)?);
    }
    for prime in &primes {
        let square = prime.ideal.mul(field, &prime.ideal);
        let m = prime.p * prime.p;
        let witness =
            order_residues(n, m).any(|(a, b)| prime.ideal.contains(a, b) && !square.contains(a, b));
        if !witness {
            return Ok(false);
        }
    }
    for (i, first) in primes.iter().enumerate() {
        for (j, second) in primes.iter().enumerate() {
            if i == j {
                continue;
            }
            let m = arith::lcm(first.p, second.p);
            let witness = order_residues(n, m)
                .any(|(a, b)| first.ideal.contains(a, b) && !second.ideal.contains(a, b));
            if !witness {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Closed-form flags next to their brute-force counterparts.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub d: i64,
    pub n: u64,
    pub la: (bool, bool),
    pub ip: (bool, bool),
    pub assoc: (bool, bool),
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.la.0 == self.la.1 && self.ip.0 == self.ip.1 && self.assoc.0 == self.assoc.1
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (la: closed-form={} oracle={}; ip: {}/{}; assoc: {}/{})",
            if self.agrees() { "OK" } else { "MISMATCH" },
            self.la.0,
            self.la.1,
            self.ip.0,
            self.ip.1,
            self.assoc.0,
            self.assoc.1
        )
    }
}

/// Run every oracle for `(d, n)` against the closed-form decisions.
pub fn verify_order(data: &FieldData, n: u64) -> Result<OracleReport> {
    let rec = data.classify(n)?;
    let f = &data.field;
    Ok(OracleReport {
        d: data.d(),
        n,
        la: (
            rec.locally_associated,
            brute_locally_associated(f, &data.unit, n)?,
        ),
        ip: (rec.ideal_preserving, brute_ideal_preserving(f, n)?),
        assoc: (rec.associated, brute_associated(f, &data.unit, n)?),
    })
}
