use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{
    holder_mean, khinchin, levy_l, levy_lambda, loch, lower_bounds, lyapunov_const, HolderMean,
    Khinchin,
};
use crate::dynamics::NIndex;

/// A reported number. Divergent quantities are an explicit signal so that an
/// `f64::INFINITY` never reaches a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuantityValue {
    Finite(f64),
    Count(u64),
    PosInf,
}

impl QuantityValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            QuantityValue::Finite(v) => Some(v),
            QuantityValue::Count(c) => Some(c as f64),
            QuantityValue::PosInf => None,
        }
    }
}

impl std::fmt::Display for QuantityValue {
    /// Finite values print with 17 significant digits, counts as integers.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QuantityValue::Finite(v) => write!(f, "{v:.16e}"),
            QuantityValue::Count(c) => write!(f, "{c}"),
            QuantityValue::PosInf => f.write_str("+inf"),
        }
    }
}

impl Serialize for QuantityValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            QuantityValue::Finite(v) => s.serialize_f64(*v),
            QuantityValue::Count(c) => s.serialize_u64(*c),
            QuantityValue::PosInf => s.serialize_str("+inf"),
        }
    }
}

/// One `(key, value)` entry of the flat record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub key: String,
    pub value: QuantityValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderEntry {
    pub r: f64,
    pub mean: HolderMean,
}

/// Every closed-form constant for one `N`, with series diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsReport {
    pub n: NIndex,
    pub khinchin: Khinchin,
    pub holder: Vec<HolderEntry>,
    pub levy_lambda: f64,
    pub levy_l: f64,
    pub lyapunov: f64,
    pub loch: f64,
    pub lower_bound_lyapunov: f64,
    pub lower_bound_denominator: f64,
}

impl ConstantsReport {
    pub fn new(n: NIndex, orders: &[f64], tol: f64) -> Self {
        let bounds = lower_bounds(n);
        ConstantsReport {
            n,
            khinchin: khinchin(n, tol),
            holder: orders
                .iter()
                .map(|&r| HolderEntry {
                    r,
                    mean: holder_mean(n, r, tol),
                })
                .collect(),
            levy_lambda: levy_lambda(n),
            levy_l: levy_l(n),
            lyapunov: lyapunov_const(n),
            loch: loch(n),
            lower_bound_lyapunov: bounds.lyapunov,
            lower_bound_denominator: bounds.denominator,
        }
    }

    /// Reports for several `N`, computed in parallel, returned in input order.
    pub fn batch(ns: &[NIndex], orders: &[f64], tol: f64) -> Vec<Self> {
        ns.par_iter().map(|&n| Self::new(n, orders, tol)).collect()
    }

    /// The flat key-value record. Key order is fixed.
    pub fn quantities(&self) -> Vec<Quantity> {
        let mut out = Vec::new();
        let mut push = |key: String, value: QuantityValue| out.push(Quantity { key, value });
        let fin = QuantityValue::Finite;
        let s = &self.khinchin.log_series;
        push("khinchin".into(), fin(self.khinchin.value));
        push("khinchin_terms".into(), QuantityValue::Count(s.terms));
        push("khinchin_tail_bound".into(), fin(s.tail_bound));
        for h in &self.holder {
            let r = h.r;
            match h.mean {
                HolderMean::Finite { value, series } => {
                    push(format!("holder[r={r}]"), fin(value));
                    push(format!("holder_terms[r={r}]"), QuantityValue::Count(series.terms));
                    push(format!("holder_tail_bound[r={r}]"), fin(series.tail_bound));
                }
                HolderMean::Divergent => push(format!("holder[r={r}]"), QuantityValue::PosInf),
            }
        }
        push("levy_lambda".into(), fin(self.levy_lambda));
        push("levy_l".into(), fin(self.levy_l));
        push("lyapunov".into(), fin(self.lyapunov));
        push("loch".into(), fin(self.loch));
        push("lower_bound_lyapunov".into(), fin(self.lower_bound_lyapunov));
        push("lower_bound_denominator".into(), fin(self.lower_bound_denominator));
        out
    }
}
