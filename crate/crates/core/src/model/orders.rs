//! Order sequences `(0, alpha, beta)` of the net of lines at points of the
//! parameter line, and their comparison with the criterion's predictions.

use serde::Serialize;

use super::PlaneModel;
use crate::criterion::CriterionReport;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::pgl2::ProjPoint;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderSequence {
    pub alpha: i64,
    pub beta: i64,
    /// Coefficients `(l0, l1, l2)` of the osculating line.
    pub osculating_line: [String; 3],
    #[serde(skip)]
    pub osculating: [FieldElement; 3],
}

/// Orders at `q` of the lines of the plane, from the local expansions of
/// `A, B, C`: the three distinct orders realized are `0 < alpha < beta`.
pub fn order_sequence_at(model: &PlaneModel, q: &ProjPoint) -> Result<OrderSequence> {
    let field = model.field();
    let e = |k: usize| {
        let mut v = [field.zero(), field.zero(), field.zero()];
        v[k] = field.one();
        v
    };
    let [a, b, c] = model.local_forms(q);
    let mut rows: Vec<(Poly, [FieldElement; 3])> = vec![(a, e(0)), (b, e(1)), (c, e(2))];
    // echelon form by lowest order: combinations keep the three series
    // independent, and the pivot orders are the distinct line orders
    for i in 0..3 {
        loop {
            let ord_i = rows[i].0.low_order().ok_or(Error::LineContainsCurve)?;
            let Some(j) = (0..i).find(|&j| rows[j].0.low_order() == Some(ord_i)) else {
                break;
            };
            let factor = &rows[i].0.coeff(ord_i) / &rows[j].0.coeff(ord_i);
            let (pj, lj) = rows[j].clone();
            let (pi, li) = &mut rows[i];
            *pi = &*pi - &pj.scale(&factor);
            for k in 0..3 {
                li[k] = &li[k] - &(&lj[k] * &factor);
            }
        }
    }
    rows.sort_by_key(|(p, _)| p.low_order());
    let orders: Vec<i64> = rows.iter().map(|(p, _)| p.low_order().unwrap() as i64).collect();
    if orders[0] != 0 {
        return Err(Error::ImageNotAsPredicted(format!("base point at {q:?}")));
    }
    let osculating = rows[2].1.clone();
    Ok(OrderSequence {
        alpha: orders[1],
        beta: orders[2],
        osculating_line: [0, 1, 2].map(|k| osculating[k].to_expr()),
        osculating,
    })
}

/// One row of the predicted-versus-computed order table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderComparison {
    pub point: ProjPoint,
    pub line_order: i64,
    pub predicted_second: Option<i64>,
    pub predicted_third: Option<i64>,
    pub alpha: i64,
    pub beta: i64,
    /// The line `Z = 0` through the images of `P1` and `P2` is the
    /// osculating line at this point.
    pub z_osculating: bool,
    pub agrees: bool,
}

/// Compares [`order_sequence_at`] with the report's table at every point
/// of `supp(D)`. Also checks that the osculating points are exactly those
/// with a predicted third order.
pub fn compare_orders(model: &PlaneModel, report: &CriterionReport) -> Result<Vec<OrderComparison>> {
    let mut out = Vec::with_capacity(report.order_table.len());
    for p in &report.order_table {
        let s = order_sequence_at(model, &p.point)?;
        let z_osculating = s.beta == p.line_order;
        let agrees = p.second.map_or(true, |v| v == s.alpha)
            && p.third.map_or(true, |v| v == s.beta)
            && (p.second.is_none() || z_osculating == p.third.is_some());
        out.push(OrderComparison {
            point: p.point.clone(),
            line_order: p.line_order,
            predicted_second: p.second,
            predicted_third: p.third,
            alpha: s.alpha,
            beta: s.beta,
            z_osculating,
            agrees,
        });
    }
    Ok(out)
}
