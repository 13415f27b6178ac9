//! Arithmetic in an extension field `F = GF(q^ell)` viewed as an `ell`-dimensional
//! vector space over its subfield `B = GF(q)`.
//!
//! Elements are stored as integer indices whose base-`p` digits are the
//! coefficients of the element as a polynomial in `xi` (a root of the
//! defining modulus) over the prime field, least significant digit first.
//! The subfield `B` is the set of elements fixed by `x -> x^q`; when `q = p`
//! its members are exactly the indices `0..p`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Fields up to this order get log/antilog and trace tables.
const TABLE_LIMIT: u64 = 1 << 16;

/// An element of `F`, identified by its index `< |F|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// JSON-loadable description of a field: `{p, q, ell, modulus: [c0, ..., 1]}`.
///
/// `modulus` is the defining polynomial of `F` over the prime field, so its
/// degree is `ell * log_p(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub p: u32,
    pub q: u32,
    pub ell: u32,
    pub modulus: Vec<u32>,
}

impl FieldConfig {
    /// GF(4) with `xi^2 = xi + 1`.
    pub fn gf4() -> Self {
        Self {
            p: 2,
            q: 2,
            ell: 2,
            modulus: vec![1, 1, 1],
        }
    }

    /// GF(8) with `xi^3 = xi^2 + 1`.
    pub fn gf8() -> Self {
        Self {
            p: 2,
            q: 2,
            ell: 3,
            modulus: vec![1, 0, 1, 1],
        }
    }

    /// GF(16) over GF(2) with `xi^4 = xi + 1`.
    pub fn gf16() -> Self {
        Self {
            p: 2,
            q: 2,
            ell: 4,
            modulus: vec![1, 1, 0, 0, 1],
        }
    }

    /// GF(16) viewed as a quadratic extension of GF(4).
    pub fn gf16_over_gf4() -> Self {
        Self {
            p: 2,
            q: 4,
            ell: 2,
            modulus: vec![1, 1, 0, 0, 1],
        }
    }

    /// GF(256) over GF(2) with modulus `x^8 + x^4 + x^3 + x^2 + 1`.
    pub fn gf256() -> Self {
        Self {
            p: 2,
            q: 2,
            ell: 8,
            modulus: vec![1, 0, 1, 1, 1, 0, 0, 0, 1],
        }
    }

    /// GF(9) over GF(3) with modulus `x^2 + 1`.
    pub fn gf9() -> Self {
        Self {
            p: 3,
            q: 3,
            ell: 2,
            modulus: vec![1, 0, 1],
        }
    }

    /// Looks up a built-in configuration by name (`gf4`, `gf8`, `gf16`,
    /// `gf16/4`, `gf256`, `gf9`).
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "gf4" => Some(Self::gf4()),
            "gf8" => Some(Self::gf8()),
            "gf16" => Some(Self::gf16()),
            "gf16/4" => Some(Self::gf16_over_gf4()),
            "gf256" => Some(Self::gf256()),
            "gf9" => Some(Self::gf9()),
            _ => None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<FieldCtx> {
        make_field(self.p, self.q, self.ell, &self.modulus)
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

struct Inner {
    config: FieldConfig,
    p: u64,
    q: u64,
    ell: usize,
    degree: usize,
    order: u64,
    /// Modulus coefficients over the prime field, low to high, monic.
    modulus: Vec<u64>,
    /// Modulus as a bit mask (characteristic 2 only).
    modulus_bits: u64,
    primitive: FieldElem,
    tables: Option<Tables>,
    /// Members of `B`, sorted by index.
    subfield: Vec<FieldElem>,
    standard_basis: OnceLock<Basis>,
}

/// Immutable field context. Cloning is cheap; all operations are pure.
#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.0.p)
            .field("q", &self.0.q)
            .field("ell", &self.0.ell)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.config == other.0.config
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds a field context, verifying that the modulus is irreducible.
pub fn make_field(p: u32, q: u32, ell: u32, modulus: &[u32]) -> Result<FieldCtx> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p));
    }
    let mut e = 0u32;
    let mut acc = 1u64;
    while acc < q as u64 {
        acc *= p as u64;
        e += 1;
    }
    if acc != q as u64 || e == 0 {
        return Err(Error::NotPrimePower { p, q });
    }
    if ell < 2 {
        return Err(Error::DegreeTooSmall(ell));
    }
    let degree = (ell * e) as usize;
    let order = (p as u64)
        .checked_pow(degree as u32)
        .filter(|&o| o <= 1 << 32);
    let order = order.ok_or(Error::FieldTooLarge {
        p,
        degree: degree as u32,
    })?;
    if modulus.len() != degree + 1 {
        return Err(Error::BadModulus(format!(
            "expected {} coefficients for degree {}, got {}",
            degree + 1,
            degree,
            modulus.len()
        )));
    }
    if modulus[degree] != 1 {
        return Err(Error::BadModulus("modulus must be monic".into()));
    }
    if let Some(c) = modulus.iter().find(|&&c| c >= p) {
        return Err(Error::BadModulus(format!(
            "coefficient {c} not reduced mod {p}"
        )));
    }
    let pm = p as u64;
    let modulus: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
    check_irreducible(pm, &modulus)?;

    let modulus_bits = if pm == 2 {
        modulus
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | (c << i))
    } else {
        0
    };
    let mut inner = Inner {
        config: FieldConfig {
            p,
            q,
            ell,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
        },
        p: pm,
        q: q as u64,
        ell: ell as usize,
        degree,
        order,
        modulus,
        modulus_bits,
        primitive: FieldElem::ZERO,
        tables: None,
        subfield: Vec::new(),
        standard_basis: OnceLock::new(),
    };
    inner.primitive = find_primitive(&inner);
    if order <= TABLE_LIMIT {
        inner.tables = Some(build_tables(&inner));
    }
    inner.subfield = if inner.q == inner.p {
        (0..p).map(FieldElem).collect()
    } else {
        let step = (order - 1) / (inner.q - 1);
        let h = slow_pow(&inner, inner.primitive, step);
        let mut members = vec![FieldElem::ZERO];
        let mut cur = FieldElem::ONE;
        for _ in 0..inner.q - 1 {
            members.push(cur);
            cur = slow_mul(&inner, cur, h);
        }
        members.sort();
        members
    };
    Ok(FieldCtx(Arc::new(inner)))
}

// ---------------------------------------------------------------------------
// Polynomials over the prime field, used only for the irreducibility test.
// ---------------------------------------------------------------------------

fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (j, &mj) in m.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - c * mj % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(&prod, m, p)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = fp_inv(lead, p);
        for c in a.iter_mut() {
            *c = *c * inv % p;
        }
    }
    a
}

/// Ben-Or irreducibility test, preceded by a root search so the common
/// failure reports a concrete root.
fn check_irreducible(p: u64, modulus: &[u64]) -> Result<()> {
    for r in 0..p {
        let v = modulus.iter().rev().fold(0u64, |acc, &c| (acc * r + c) % p);
        if v == 0 {
            return Err(Error::ReducibleRoot(r as u32));
        }
    }
    let degree = modulus.len() - 1;
    // h = x^(p^i) mod f
    let mut h = fp_rem(&[0, 1], modulus, p);
    for _ in 1..=degree / 2 {
        let mut pow = vec![1u64];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                pow = fp_mulmod(&pow, &base, modulus, p);
            }
            base = fp_mulmod(&base, &base, modulus, p);
            e >>= 1;
        }
        h = pow;
        let mut diff = h.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let g = fp_gcd(modulus, &diff, p);
        if g.len() > 1 {
            return Err(Error::ReducibleFactor(
                g.iter().map(|&c| c as u32).collect(),
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Table-free arithmetic.
// ---------------------------------------------------------------------------

fn digits(inner: &Inner, x: u64) -> Vec<u64> {
    let mut out = vec![0u64; inner.degree];
    let mut v = x;
    for d in out.iter_mut() {
        *d = v % inner.p;
        v /= inner.p;
    }
    out
}

fn undigits(inner: &Inner, ds: &[u64]) -> u64 {
    ds.iter().rev().fold(0u64, |acc, &d| acc * inner.p + d)
}

fn slow_mul(inner: &Inner, a: FieldElem, b: FieldElem) -> FieldElem {
    let d = inner.degree;
    if inner.p == 2 {
        let (a, b) = (a.0 as u64, b.0 as u64);
        let mut prod = 0u64;
        for i in 0..d {
            if (b >> i) & 1 == 1 {
                prod ^= a << i;
            }
        }
        for i in (d..2 * d).rev() {
            if (prod >> i) & 1 == 1 {
                prod ^= inner.modulus_bits << (i - d);
            }
        }
        return FieldElem(prod as u32);
    }
    let p = inner.p;
    let da = digits(inner, a.0 as u64);
    let db = digits(inner, b.0 as u64);
    let mut prod = vec![0u64; 2 * d];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for i in (d..2 * d).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        for (j, &mj) in inner.modulus.iter().enumerate() {
            prod[i - d + j] = (prod[i - d + j] + p - c * mj % p) % p;
        }
    }
    FieldElem(undigits(inner, &prod[..d]) as u32)
}

fn slow_pow(inner: &Inner, a: FieldElem, mut e: u64) -> FieldElem {
    let mut r = FieldElem::ONE;
    let mut b = a;
    while e > 0 {
        if e & 1 == 1 {
            r = slow_mul(inner, r, b);
        }
        b = slow_mul(inner, b, b);
        e >>= 1;
    }
    r
}

fn find_primitive(inner: &Inner) -> FieldElem {
    let group = inner.order - 1;
    let factors = prime_factors(group);
    (1..inner.order)
        .map(|i| FieldElem(i as u32))
        .find(|&g| {
            factors
                .iter()
                .all(|&r| slow_pow(inner, g, group / r) != FieldElem::ONE)
        })
        .expect("the multiplicative group of a finite field is cyclic")
}

fn build_tables(inner: &Inner) -> Tables {
    let n = inner.order as usize;
    let mut exp = vec![0u32; n - 1];
    let mut log = vec![0u32; n];
    let mut cur = FieldElem::ONE;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = cur.0;
        log[cur.0 as usize] = i as u32;
        cur = slow_mul(inner, cur, inner.primitive);
    }
    let mut trace = vec![0u32; n];
    for (x, slot) in trace.iter_mut().enumerate() {
        let mut acc = 0u64;
        let mut y = FieldElem(x as u32);
        for _ in 0..inner.ell {
            acc = add_raw(inner, acc, y.0 as u64);
            y = slow_pow(inner, y, inner.q);
        }
        *slot = acc as u32;
    }
    Tables { exp, log, trace }
}

fn add_raw(inner: &Inner, a: u64, b: u64) -> u64 {
    if inner.p == 2 {
        return a ^ b;
    }
    let p = inner.p;
    let (mut a, mut b) = (a, b);
    let mut out = 0u64;
    let mut place = 1u64;
    for _ in 0..inner.degree {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

impl FieldCtx {
    pub fn config(&self) -> &FieldConfig {
        &self.0.config
    }

    /// Characteristic.
    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Order of the subfield `B`.
    pub fn q(&self) -> u64 {
        self.0.q
    }

    /// Extension degree of `F` over `B`.
    pub fn ell(&self) -> usize {
        self.0.ell
    }

    /// `|F| = q^ell`.
    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn has_tables(&self) -> bool {
        self.0.tables.is_some()
    }

    /// The primitive element used for the log tables.
    pub fn primitive(&self) -> FieldElem {
        self.0.primitive
    }

    /// The root `xi` of the modulus.
    pub fn xi(&self) -> FieldElem {
        FieldElem(self.0.p as u32)
    }

    pub fn elem(&self, index: u64) -> Result<FieldElem> {
        if index >= self.0.order {
            return Err(Error::ElementOutOfRange {
                index,
                order: self.0.order,
            });
        }
        Ok(FieldElem(index as u32))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.0.order).map(|i| FieldElem(i as u32))
    }

    /// Image of an integer in the prime field.
    pub fn constant(&self, c: i64) -> FieldElem {
        FieldElem(c.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(add_raw(&self.0, a.0 as u64, b.0 as u64) as u32)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.0.p == 2 {
            return a;
        }
        let p = self.0.p;
        let ds: Vec<u64> = digits(&self.0, a.0 as u64)
            .into_iter()
            .map(|d| (p - d) % p)
            .collect();
        FieldElem(undigits(&self.0, &ds) as u32)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.0.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    return FieldElem::ZERO;
                }
                let s = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
                FieldElem(t.exp[(s % (self.0.order - 1)) as usize])
            }
            None => slow_mul(&self.0, a, b),
        }
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        match &self.0.tables {
            Some(t) => {
                if e == 0 {
                    return FieldElem::ONE;
                }
                if a.0 == 0 {
                    return FieldElem::ZERO;
                }
                let group = self.0.order - 1;
                let l = (t.log[a.0 as usize] as u64 * (e % group)) % group;
                FieldElem(t.exp[l as usize])
            }
            None => slow_pow(&self.0, a, e),
        }
    }

    /// Multiplicative inverse as `a^(|F|-2)`; maps zero to zero.
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.0.order - 2)
    }

    /// Division; `b` must be nonzero.
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(!b.is_zero(), "division by zero");
        self.mul(a, self.inv(b))
    }

    /// Frobenius map relative to `B`: `x -> x^q`.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.0.q)
    }

    /// Relative trace `Tr(x) = sum_{j < ell} x^(q^j)`, an element of `B`.
    pub fn trace(&self, x: FieldElem) -> FieldElem {
        if let Some(t) = &self.0.tables {
            return FieldElem(t.trace[x.0 as usize]);
        }
        let mut acc = FieldElem::ZERO;
        let mut y = x;
        for _ in 0..self.0.ell {
            acc = self.add(acc, y);
            y = self.frobenius(y);
        }
        acc
    }

    pub fn sum<I: IntoIterator<Item = FieldElem>>(&self, items: I) -> FieldElem {
        items
            .into_iter()
            .fold(FieldElem::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn product<I: IntoIterator<Item = FieldElem>>(&self, items: I) -> FieldElem {
        items
            .into_iter()
            .fold(FieldElem::ONE, |acc, x| self.mul(acc, x))
    }

    pub fn is_in_subfield(&self, x: FieldElem) -> bool {
        self.subfield_index(x).is_some()
    }

    /// Members of `B` in index order.
    pub fn subfield(&self) -> &[FieldElem] {
        &self.0.subfield
    }

    /// Position of `x` within [`FieldCtx::subfield`]; this is the wire
    /// encoding of a sub-symbol. For `q = p` it equals the element index.
    pub fn subfield_index(&self, x: FieldElem) -> Option<u32> {
        if self.0.q == self.0.p {
            return (u64::from(x.0) < self.0.p).then_some(x.0);
        }
        self.0.subfield.binary_search(&x).ok().map(|i| i as u32)
    }

    pub fn subfield_elem(&self, index: u32) -> Option<FieldElem> {
        self.0.subfield.get(index as usize).copied()
    }

    /// The standard `B`-basis `(1, xi, ..., xi^(ell-1))` with its trace dual.
    pub fn standard_basis(&self) -> &Basis {
        self.0.standard_basis.get_or_init(|| {
            let xi = self.xi();
            let elems = (0..self.0.ell).map(|i| self.pow(xi, i as u64)).collect();
            Basis::new(self, elems).expect("powers of a generator form a basis")
        })
    }

    /// Coordinates of `x` over the standard basis, as members of `B`.
    pub fn coords(&self, x: FieldElem) -> Vec<FieldElem> {
        if self.0.q == self.0.p {
            return digits(&self.0, x.0 as u64)
                .into_iter()
                .map(|d| FieldElem(d as u32))
                .collect();
        }
        self.standard_basis().coords(self, x)
    }

    pub fn from_coords(&self, c: &[FieldElem]) -> FieldElem {
        if self.0.q == self.0.p {
            let ds: Vec<u64> = c.iter().map(|e| e.0 as u64).collect();
            return FieldElem(undigits(&self.0, &ds) as u32);
        }
        self.standard_basis().from_coords(self, c)
    }

    /// Polynomial rendering over the prime field, e.g. `x^2+x+1`.
    pub fn render(&self, x: FieldElem) -> String {
        let ds = digits(&self.0, x.0 as u64);
        let terms: Vec<String> = ds
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let coef = if c == 1 && i > 0 {
                    String::new()
                } else {
                    c.to_string()
                };
                match i {
                    0 => coef,
                    1 => format!("{coef}x"),
                    _ => format!("{coef}x^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// A `B`-basis of `F` together with its trace-dual basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    elems: Vec<FieldElem>,
    dual: Vec<FieldElem>,
}

impl Basis {
    /// Validates that `elems` is a `B`-basis by inverting its trace Gram matrix
    /// `G[i][k] = Tr(u_i u_k)`; the rows of `G^-1` give the dual basis.
    pub fn new(ctx: &FieldCtx, elems: Vec<FieldElem>) -> Result<Self> {
        if elems.len() != ctx.ell() {
            return Err(Error::NotABasis);
        }
        let gram: Vec<Vec<FieldElem>> = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| ctx.trace(ctx.mul(a, b))).collect())
            .collect();
        let inv = linalg::invert(ctx, &gram).ok_or(Error::NotABasis)?;
        let dual = inv
            .iter()
            .map(|row| ctx.sum(row.iter().zip(&elems).map(|(&g, &u)| ctx.mul(g, u))))
            .collect();
        Ok(Self { elems, dual })
    }

    pub fn elems(&self) -> &[FieldElem] {
        &self.elems
    }

    pub fn dual_elems(&self) -> &[FieldElem] {
        &self.dual
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Coefficients `c_i = Tr(dual_i * x)`, so that `x = sum c_i u_i`.
    pub fn coords(&self, ctx: &FieldCtx, x: FieldElem) -> Vec<FieldElem> {
        self.dual
            .iter()
            .map(|&d| ctx.trace(ctx.mul(d, x)))
            .collect()
    }

    pub fn from_coords(&self, ctx: &FieldCtx, c: &[FieldElem]) -> FieldElem {
        ctx.sum(c.iter().zip(&self.elems).map(|(&ci, &u)| ctx.mul(ci, u)))
    }

    /// Rebuilds `x` from its traces against this basis: `x = sum Tr(u_i x) dual_i`.
    pub fn reconstruct(&self, ctx: &FieldCtx, traces: &[FieldElem]) -> FieldElem {
        ctx.sum(traces.iter().zip(&self.dual).map(|(&t, &d)| ctx.mul(t, d)))
    }
}

/// The trace-dual of `u`, returned as a basis in its own right.
pub fn trace_dual_basis(_ctx: &FieldCtx, u: &Basis) -> Basis {
    Basis {
        elems: u.dual.clone(),
        dual: u.elems.clone(),
    }
}

/// Coordinates of `x` over `basis` as members of `B`.
pub fn coords(ctx: &FieldCtx, x: FieldElem, basis: &Basis) -> Vec<FieldElem> {
    basis.coords(ctx, x)
}

pub fn from_coords(ctx: &FieldCtx, c: &[FieldElem], basis: &Basis) -> FieldElem {
    basis.from_coords(ctx, c)
}
