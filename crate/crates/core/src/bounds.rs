//! Achievable repair bandwidth and the lower bounds for linear masked repair.
//! All quantities are in sub-symbols of `B = GF(q)`.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundInput {
    pub n: u64,
    pub k: u64,
    pub t: u64,
    pub q: u64,
    pub ell: u32,
    /// Helpers contacted; defaults to `n - 1`.
    pub d: Option<u64>,
}

impl BoundInput {
    pub fn new(n: u64, k: u64, t: u64, q: u64, ell: u32) -> Result<Self> {
        let input = Self {
            n,
            k,
            t,
            q,
            ell,
            d: None,
        };
        input.validate()?;
        Ok(input)
    }

    pub fn with_helpers(mut self, d: u64) -> Result<Self> {
        self.d = Some(d);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let field = self
            .field_order()
            .ok_or_else(|| Error::Infeasible("field order overflows".into()))?;
        if self.q < 2 || self.ell < 1 {
            return Err(Error::Infeasible(format!(
                "bad field q = {}, ell = {}",
                self.q, self.ell
            )));
        }
        if self.k < 1 || self.k + self.t >= self.n {
            return Err(Error::Infeasible(format!(
                "need k >= 1 and k + t < n, got n = {}, k = {}, t = {}",
                self.n, self.k, self.t
            )));
        }
        if self.n > field {
            return Err(Error::Infeasible(format!(
                "n = {} exceeds |F| = {field}",
                self.n
            )));
        }
        if let Some(d) = self.d {
            if d + 1 > self.n || d < self.k + self.t {
                return Err(Error::Infeasible(format!(
                    "helper count {d} outside [k + t, n - 1]"
                )));
            }
        }
        Ok(())
    }

    pub fn field_order(&self) -> Option<u64> {
        self.q.checked_pow(self.ell)
    }

    /// Length of the punctured code actually used: `d + 1`.
    pub fn effective_n(&self) -> u64 {
        self.d.map_or(self.n, |d| d + 1)
    }
}

/// Largest `e` with `q^e <= x`, for `x >= 1`.
fn ilog(q: u64, x: u64) -> u32 {
    let mut e = 0;
    let mut p = q;
    while p <= x {
        e += 1;
        match p.checked_mul(q) {
            Some(next) => p = next,
            None => break,
        }
    }
    e
}

/// Best subspace dimension and bandwidth `(n - 1)(ell - m)` of the masked
/// scheme, or `None` when no `m >= 1` fits. `t = 0` is treated as the
/// non-private scheme, which has the same room as `t = 1`.
pub fn scheme_bandwidth(input: &BoundInput) -> Option<(u64, u32)> {
    let n = input.effective_n();
    let room = (n - input.k + 1).checked_sub(input.t.max(1))?;
    if room == 0 {
        return None;
    }
    let m = ilog(input.q, room).min(input.ell - 1);
    (m >= 1).then(|| ((n - 1) * (input.ell - m) as u64, m))
}

/// Fetching `k` whole symbols.
pub fn naive_bandwidth(input: &BoundInput) -> u64 {
    input.k * input.ell as u64
}

/// `(n - 1) log_q (num / den)` kept as its exact parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FractionalBound {
    pub nodes: u64,
    pub num: u128,
    pub den: u128,
    pub base: u64,
    pub value: f64,
}

fn ratio_parts(input: &BoundInput) -> (u64, u128, u128) {
    let n = input.effective_n();
    let field = input.field_order().expect("validated") as u128;
    let nodes = n - 1;
    let num = nodes as u128 * field;
    let den = (field - 1) * (n - input.k - input.t) as u128 + nodes as u128;
    (nodes, num, den)
}

pub fn fractional_bound(input: &BoundInput) -> FractionalBound {
    let (nodes, num, den) = ratio_parts(input);
    let value = nodes as f64 * ((num as f64 / den as f64).ln() / (input.q as f64).ln());
    FractionalBound {
        nodes,
        num,
        den,
        base: input.q,
        value,
    }
}

/// Integer-program bound: `n0` nodes at `floor(log_q((n-1)/L))` sub-symbols and
/// the rest at the ceiling.
pub fn integer_bound(input: &BoundInput) -> u64 {
    let (nodes, num, den) = ratio_parts(input);
    let q = input.q as u128;
    // a = floor(log_q(num / den)): largest a with q^a den <= num
    let mut a = 0u32;
    let mut qa = 1u128;
    while qa * q * den <= num {
        qa *= q;
        a += 1;
    }
    if qa * den == num {
        return nodes * a as u64;
    }
    let c = a + 1;
    let qc = qa * q;
    let field = input.field_order().expect("validated") as u128;
    // n0 = floor((L - (n-1) q^-c) / (q^-a - q^-c)), scaled by |F| q^c
    let n0 = ((den * qc - nodes as u128 * field) / (field * (q - 1))) as u64;
    let n0 = n0.min(nodes);
    n0 * a as u64 + (nodes - n0) * c as u64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandwidthReport {
    pub input: BoundInput,
    pub scheme: Option<u64>,
    pub m: u32,
    pub naive: u64,
    pub fractional: FractionalBound,
    pub integer: u64,
    pub attained: bool,
}

pub fn report(input: &BoundInput) -> BandwidthReport {
    let scheme = scheme_bandwidth(input);
    let integer = integer_bound(input);
    BandwidthReport {
        input: *input,
        scheme: scheme.map(|s| s.0),
        m: scheme.map_or(0, |s| s.1),
        naive: naive_bandwidth(input),
        fractional: fractional_bound(input),
        integer,
        attained: scheme.is_some_and(|s| s.0 == integer),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub d: u64,
    pub bw_private: u64,
    pub bw_plain: u64,
    pub bound_private: u64,
    pub bound_plain: u64,
    pub m_private: u32,
    pub m_plain: u32,
    pub attained: bool,
}

/// Cheapest `(bandwidth, m)` with at most `d` helpers, puncturing the code to
/// `d' + 1` points. `m = 0` downloads whole symbols from `d' >= k + t - 1` helpers.
fn best_with_at_most(k: u64, t: u64, q: u64, ell: u32, d: u64) -> (u64, u32) {
    let mut best = (u64::MAX, 0);
    for dp in (k + t).saturating_sub(1).max(1)..=d {
        let room = (dp + 2 - k).saturating_sub(t.max(1));
        if room == 0 {
            continue;
        }
        let m = ilog(q, room).min(ell - 1);
        let bw = dp * (ell - m) as u64;
        if bw < best.0 {
            best = (bw, m);
        }
    }
    best
}

fn min_bound(k: u64, t: u64, q: u64, ell: u32, d: u64) -> Result<u64> {
    let mut best = u64::MAX;
    for dp in (k + t)..=d {
        best = best.min(integer_bound(&BoundInput::new(dp + 1, k, t, q, ell)?));
    }
    Ok(best)
}

/// Private (given `t`) against non-private curves as the helper budget `d` grows.
pub fn sweep(
    k: u64,
    t: u64,
    q: u64,
    ell: u32,
    d_range: RangeInclusive<u64>,
) -> Result<Vec<SweepRow>> {
    let field = q
        .checked_pow(ell)
        .ok_or_else(|| Error::Infeasible("field order overflows".into()))?;
    if d_range.is_empty() || *d_range.start() < k + t || *d_range.end() + 1 > field {
        return Err(Error::Infeasible(format!(
            "need k + t <= d <= |F| - 1, got d in {}..={}",
            d_range.start(),
            d_range.end()
        )));
    }
    d_range
        .map(|d| {
            let (bw_private, m_private) = best_with_at_most(k, t, q, ell, d);
            let (bw_plain, m_plain) = best_with_at_most(k, 0, q, ell, d);
            let bound_private = min_bound(k, t, q, ell, d)?;
            let bound_plain = min_bound(k, 0, q, ell, d)?;
            Ok(SweepRow {
                d,
                bw_private,
                bw_plain,
                bound_private,
                bound_plain,
                m_private,
                m_plain,
                attained: bw_private == bound_private,
            })
        })
        .collect()
}

pub const SWEEP_HEADER: &str =
    "d,bw_private,bw_plain,bound_private,bound_plain,m_private,m_plain,attained";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.d,
            r.bw_private,
            r.bw_plain,
            r.bound_private,
            r.bound_plain,
            r.m_private,
            r.m_plain,
            r.attained
        ));
    }
    out
}
