//! Per-order decisions: ideal-preserving, locally associated, associated,
//! half-factorial, and the class number of the order.

use serde::{Deserialize, Serialize};

use crate::arith::{self, Factorization};
use crate::classgroup::{self, FormClassData};
use crate::error::{Error, Result};
use crate::lfun;
use crate::pell::{self, FundamentalUnit};
use crate::quadfield::{FieldContext, SplitKind};
use crate::unitindex;

/// The order `Z + nO_K` in `Q(√d)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderSpec {
    pub d: i64,
    pub n: u64,
}

impl OrderSpec {
    pub fn new(d: i64, n: u64) -> Result<Self> {
        FieldContext::new(d)?;
        if n == 0 {
            return Err(Error::Zero("order index"));
        }
        Ok(OrderSpec { d, n })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub d: i64,
    pub n: u64,
    #[serde(rename = "D")]
    pub disc: i64,
    pub m: u64,
    #[serde(rename = "L")]
    pub l: u64,
    pub ideal_preserving: bool,
    pub locally_associated: bool,
    pub associated: bool,
    pub h_maximal: u64,
    pub h_order: u64,
    pub hfd: bool,
}

impl ClassificationRecord {
    /// Checks the relations every record must satisfy.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Internal(format!("record {self:?}: {what}")));
        if self.associated != (self.ideal_preserving && self.locally_associated) {
            return fail("associated ≠ ip ∧ la");
        }
        if self.locally_associated != (self.m == self.l) {
            return fail("la ≠ (m = L)");
        }
        if self.m == 0 || !self.l.is_multiple_of(self.m) {
            return fail("m does not divide L");
        }
        if self.h_order != self.h_maximal * (self.l / self.m) {
            return fail("h_order ≠ h_maximal·L/m");
        }
        if self.n == 1 && !(self.ideal_preserving && self.locally_associated) {
            return fail("maximal order must carry every flag");
        }
        Ok(())
    }
}

/// Everything about `Q(√d)` that does not depend on the index: the field,
/// its fundamental unit and its class number.
#[derive(Clone, Debug)]
pub struct FieldData {
    pub field: FieldContext,
    pub unit: FundamentalUnit,
    pub class: FormClassData,
}

impl FieldData {
    pub fn new(d: i64) -> Result<Self> {
        let field = FieldContext::new(d)?;
        let unit = pell::fundamental_unit(&field)?;
        let class = classgroup::class_number(&field, &unit)?;
        Ok(FieldData { field, unit, class })
    }

    pub fn d(&self) -> i64 {
        self.field.d()
    }

    pub fn is_ideal_preserving(&self, n: u64) -> Result<bool> {
        is_ideal_preserving_in(&self.field, &arith::factorize(n)?)
    }

    pub fn is_locally_associated(&self, n: u64) -> Result<bool> {
        let m = unitindex::min_power(&self.field, &self.unit, n)?;
        Ok(m == lfun::l_value(n, self.d())?)
    }

    pub fn is_associated(&self, n: u64) -> Result<bool> {
        Ok(self.is_ideal_preserving(n)? && self.is_locally_associated(n)?)
    }

    pub fn classify(&self, n: u64) -> Result<ClassificationRecord> {
        if n == 0 {
            return Err(Error::Zero("order index"));
        }
        let fact = arith::factorize(n)?;
        let m = unitindex::min_power(&self.field, &self.unit, n)?;
        let l = lfun::l_from_factorization(&fact, self.d());
        let ip = is_ideal_preserving_in(&self.field, &fact)?;
        self.assemble(n, &fact, m, l, ip)
    }

    /// Build a record from precomputed `m`, `L` and the ip flag.
    pub(crate) fn assemble(
        &self,
        n: u64,
        fact: &Factorization,
        m: u64,
        l: u64,
        ip: bool,
    ) -> Result<ClassificationRecord> {
        let la = m == l;
        let associated = ip && la;
        let h_order = order_class_number(m, l, self.class.h)?;
        let hfd = hfd_rule(n, fact, associated, self.class.h);
        let rec = ClassificationRecord {
            d: self.d(),
            n,
            disc: self.field.disc(),
            m,
            l,
            ideal_preserving: ip,
            locally_associated: la,
            associated,
            h_maximal: self.class.h,
            h_order,
            hfd,
        };
        debug_assert!(rec.check_invariants().is_ok());
        Ok(rec)
    }
}

fn is_ideal_preserving_in(field: &FieldContext, fact: &Factorization) -> Result<bool> {
    for (p, _) in fact.iter() {
        if field.split_kind(p)? != SplitKind::Inert {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Z + nO_K` is ideal-preserving iff every prime dividing `n` is inert.
pub fn is_ideal_preserving(spec: OrderSpec) -> Result<bool> {
    let field = FieldContext::new(spec.d)?;
    is_ideal_preserving_in(&field, &arith::factorize(spec.n)?)
}

/// Locally associated iff the unit index equals `L(n, d)`.
pub fn is_locally_associated(spec: OrderSpec) -> Result<bool> {
    let field = FieldContext::new(spec.d)?;
    let unit = pell::fundamental_unit(&field)?;
    let m = unitindex::min_power(&field, &unit, spec.n)?;
    Ok(m == lfun::l_value(spec.n, spec.d)?)
}

pub fn is_associated(spec: OrderSpec) -> Result<bool> {
    Ok(is_ideal_preserving(spec)? && is_locally_associated(spec)?)
}

/// `|Cl(R)| = |Cl(O_K)| · L / m`.
pub fn order_class_number(m: u64, l: u64, h_maximal: u64) -> Result<u64> {
    if m == 0 || !l.is_multiple_of(m) {
        return Err(Error::Internal(format!(
            "unit index {m} does not divide L = {l}"
        )));
    }
    Ok(h_maximal * (l / m))
}

fn hfd_rule(n: u64, fact: &Factorization, associated: bool, h_maximal: u64) -> bool {
    if h_maximal > 2 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let index_ok = match fact.pairs() {
        [(_, 1)] => true,
        [(2, 1), (q, 1)] => *q > 2,
        _ => false,
    };
    associated && index_ok
}

/// Half-factoriality: for `n = 1` the class number test alone; otherwise
/// additionally the order is associated and `n` is a prime or twice an odd
/// prime.
pub fn is_hfd(spec: OrderSpec, associated: bool, h_maximal: u64) -> Result<bool> {
    Ok(hfd_rule(
        spec.n,
        &arith::factorize(spec.n)?,
        associated,
        h_maximal,
    ))
}

pub fn classify_order(spec: OrderSpec) -> Result<ClassificationRecord> {
    FieldData::new(spec.d)?.classify(spec.n)
}
