//! Reed-Solomon codes `RS(A, k)` and the multipliers of their GRS dual.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldConfig, FieldCtx, FieldElem};
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub struct CodeSpec {
    field: FieldCtx,
    alphas: Vec<FieldElem>,
    k: usize,
    lambdas: Vec<FieldElem>,
}

/// `lambda_i^-1 = prod_{j != i} (alpha_i - alpha_j)`.
pub fn dual_multipliers(ctx: &FieldCtx, alphas: &[FieldElem]) -> Result<Vec<FieldElem>> {
    check_distinct(alphas)?;
    Ok(alphas
        .iter()
        .enumerate()
        .map(|(i, &ai)| {
            let prod = ctx.product(
                alphas
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &aj)| ctx.sub(ai, aj)),
            );
            ctx.inv(prod)
        })
        .collect())
}

fn check_distinct(alphas: &[FieldElem]) -> Result<()> {
    let mut sorted = alphas.to_vec();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicatePoint(w[0].0));
    }
    Ok(())
}

impl CodeSpec {
    pub fn new(field: FieldCtx, alphas: Vec<FieldElem>, k: usize) -> Result<Self> {
        let n = alphas.len();
        if k == 0 || k >= n {
            return Err(Error::InvalidCode(format!(
                "need 1 <= k < n, got k = {k}, n = {n}"
            )));
        }
        if n as u64 > field.order() {
            return Err(Error::InvalidCode(format!(
                "n = {n} exceeds |F| = {}",
                field.order()
            )));
        }
        for &a in &alphas {
            field.elem(a.0 as u64)?;
        }
        let lambdas = dual_multipliers(&field, &alphas)?;
        Ok(Self {
            field,
            alphas,
            k,
            lambdas,
        })
    }

    /// Code evaluated on the first `n` field elements in index order.
    pub fn first_n(field: FieldCtx, n: usize, k: usize) -> Result<Self> {
        if n as u64 > field.order() {
            return Err(Error::InvalidCode(format!(
                "n = {n} exceeds |F| = {}",
                field.order()
            )));
        }
        let alphas = field.elements().take(n).collect();
        Self::new(field, alphas, k)
    }

    /// Full-length code on all of `F`.
    pub fn full_length(field: FieldCtx, k: usize) -> Result<Self> {
        let n = field.order() as usize;
        Self::first_n(field, n, k)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alphas(&self) -> &[FieldElem] {
        &self.alphas
    }

    pub fn lambdas(&self) -> &[FieldElem] {
        &self.lambdas
    }

    pub fn position(&self, alpha: FieldElem) -> Option<usize> {
        self.alphas.iter().position(|&a| a == alpha)
    }

    /// Evaluates the message polynomial with coefficients `message` (low degree first).
    pub fn encode(&self, message: &[FieldElem]) -> Result<Codeword> {
        if message.len() != self.k {
            return Err(Error::WrongLength {
                expected: self.k,
                got: message.len(),
            });
        }
        let f = Poly::from_coeffs(message.to_vec());
        Ok(self.encode_poly(f))
    }

    /// Systematic encoding: the first `k` symbols equal `data`.
    pub fn encode_systematic(&self, data: &[FieldElem]) -> Result<Codeword> {
        if data.len() != self.k {
            return Err(Error::WrongLength {
                expected: self.k,
                got: data.len(),
            });
        }
        let pts: Vec<_> = self.alphas[..self.k]
            .iter()
            .copied()
            .zip(data.iter().copied())
            .collect();
        let f = Poly::interpolate(&self.field, &pts)?;
        Ok(self.encode_poly(f))
    }

    pub(crate) fn encode_poly(&self, f: Poly) -> Codeword {
        let values = self
            .alphas
            .iter()
            .map(|&a| f.eval(&self.field, a))
            .collect();
        Codeword {
            values,
            poly: Some(f),
        }
    }

    /// Whether `sum_j lambda_j c_j r(alpha_j)` vanishes. `r` must have degree `< n - k`.
    pub fn verify_parity(&self, c: &Codeword, r: &Poly) -> Result<bool> {
        let bound = self.n() - self.k;
        if let Some(d) = r.degree().filter(|&d| d >= bound) {
            return Err(Error::ParityDegree { degree: d, bound });
        }
        self.check_len(c)?;
        let f = &self.field;
        let s = f.sum(
            self.alphas
                .iter()
                .zip(&self.lambdas)
                .zip(&c.values)
                .map(|((&a, &l), &v)| f.mul(f.mul(l, v), r.eval(f, a))),
        );
        Ok(s.is_zero())
    }

    fn check_len(&self, c: &Codeword) -> Result<()> {
        if c.values.len() != self.n() {
            return Err(Error::WrongLength {
                expected: self.n(),
                got: c.values.len(),
            });
        }
        Ok(())
    }

    /// Interpolates from `k` (position, value) pairs and re-encodes.
    pub fn naive_decode(&self, symbols: &[(usize, FieldElem)]) -> Result<Codeword> {
        if symbols.len() != self.k {
            return Err(Error::WrongLength {
                expected: self.k,
                got: symbols.len(),
            });
        }
        let mut pts = Vec::with_capacity(self.k);
        for &(pos, v) in symbols {
            let a = *self
                .alphas
                .get(pos)
                .ok_or_else(|| Error::InvalidCode(format!("position {pos} out of range")))?;
            pts.push((a, v));
        }
        let f = Poly::interpolate(&self.field, &pts)?;
        Ok(self.encode_poly(f))
    }

    /// Sub-symbols downloaded by fetching `k` whole symbols.
    pub fn naive_retrieval_bandwidth(&self) -> usize {
        self.k * self.field.ell()
    }

    pub fn to_json(&self) -> CodeSpecJson {
        CodeSpecJson {
            field: self.field.config().clone(),
            alphas: self.alphas.iter().map(|a| a.0).collect(),
            k: self.k,
        }
    }
}

/// Serialized form `{field, alphas, k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpecJson {
    pub field: FieldConfig,
    pub alphas: Vec<u32>,
    pub k: usize,
}

impl CodeSpecJson {
    pub fn build(&self) -> Result<CodeSpec> {
        let field = self.field.build()?;
        let alphas = self
            .alphas
            .iter()
            .map(|&a| field.elem(a as u64))
            .collect::<Result<Vec<_>>>()?;
        CodeSpec::new(field, alphas, self.k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    values: Vec<FieldElem>,
    poly: Option<Poly>,
}

/// One line of `codeword.jsonl`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolRecord {
    pub alpha: u32,
    pub value: u32,
}

impl Codeword {
    pub fn from_values(values: Vec<FieldElem>) -> Self {
        Self { values, poly: None }
    }

    pub fn values(&self) -> &[FieldElem] {
        &self.values
    }

    pub fn poly(&self) -> Option<&Poly> {
        self.poly.as_ref()
    }

    pub fn write_jsonl<W: Write>(&self, spec: &CodeSpec, mut out: W) -> Result<()> {
        for (a, v) in spec.alphas().iter().zip(&self.values) {
            let rec = SymbolRecord {
                alpha: a.0,
                value: v.0,
            };
            serde_json::to_writer(&mut out, &rec)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Reads a codeword file, ordering symbols by the code's evaluation points.
    pub fn read_jsonl<R: BufRead>(spec: &CodeSpec, input: R) -> Result<Self> {
        let mut values = vec![None; spec.n()];
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: SymbolRecord = serde_json::from_str(&line)?;
            let pos = spec
                .position(FieldElem(rec.alpha))
                .ok_or(Error::UnknownTarget(rec.alpha))?;
            values[pos] = Some(spec.field().elem(rec.value as u64)?);
        }
        let got = values.iter().filter(|v| v.is_some()).count();
        if got != spec.n() {
            return Err(Error::WrongLength {
                expected: spec.n(),
                got,
            });
        }
        Ok(Self::from_values(
            values.into_iter().map(Option::unwrap).collect(),
        ))
    }
}
