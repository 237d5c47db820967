use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Transversal, VertexId};
use crate::poly::{gap_signs, isolate_roots_unit, IsolatedRoot, Sign, UniPoly};
use crate::rational::{int, to_fraction_string, Rational};

use super::colored::ColorSwitching;
use super::exact::probability_poly;
use super::{Param, Query};

/// At most `2^16` transversal sets are averaged over.
pub const MAX_AVERAGE_VERTICES: usize = 16;

/// E5 probability of `q` averaged uniformly over all `T ⊆ V`, as a
/// polynomial in the red probability `p`.
pub fn avg_prob_over_t_poly(g: &MultiGraph, q: &Query) -> Result<UniPoly> {
    let n = g.vertex_count();
    if n > MAX_AVERAGE_VERTICES {
        return Err(Error::guard("averaged vertices", MAX_AVERAGE_VERTICES as u64, n as u64));
    }
    q.validate(g)?;
    let parts: Vec<UniPoly> = (0..1u64 << n)
        .into_par_iter()
        .map(|mask| {
            let model = ColorSwitching::e5(g, &Transversal::from_mask(mask, n), Param::Symbolic)?;
            probability_poly(&model, q)
        })
        .collect::<Result<_>>()?;
    let sum = parts.iter().fold(UniPoly::zero(), |acc, p| &acc + p);
    Ok(sum.scale(&(Rational::from_integer(1.into()) / int(1i64 << n))))
}

pub fn avg_prob_over_t(g: &MultiGraph, p: &Rational, q: &Query) -> Result<Rational> {
    Param::Value(p.clone()).check()?;
    Ok(avg_prob_over_t_poly(g, q)?.eval(p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    pub interval: IsolatedRoot,
    /// Sign of the difference just left and right of the root; `None`
    /// when the root sits on the boundary of `[0, 1]`.
    pub left: Option<Sign>,
    pub right: Option<Sign>,
}

impl Serialize for RootReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RootReport", 6)?;
        st.serialize_field("lo", &to_fraction_string(&self.interval.lo))?;
        st.serialize_field("hi", &to_fraction_string(&self.interval.hi))?;
        st.serialize_field("exact", &self.interval.exact)?;
        st.serialize_field("approx", &self.interval.approx())?;
        st.serialize_field("left", &self.left)?;
        st.serialize_field("right", &self.right)?;
        st.end()
    }
}

/// Roots in `[0, 1]` of `D(p) = avg P(u_0 -> v_0) - avg P(u_0 -> v_1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalReport {
    pub difference: UniPoly,
    /// `D` vanishes identically, so there is no isolated crossing.
    pub identically_zero: bool,
    pub roots: Vec<RootReport>,
}

impl CriticalReport {
    /// A single crossing with `D < 0` below and `D > 0` above.
    pub fn is_single_crossing(&self) -> bool {
        self.roots.len() == 1
            && self.roots[0].left == Some(Sign::Negative)
            && self.roots[0].right == Some(Sign::Positive)
    }
}

pub fn critical_probability(g: &MultiGraph, u: VertexId, v: VertexId, tol: &Rational) -> Result<CriticalReport> {
    if *tol <= int(0) {
        return Err(Error::NonPositiveTolerance);
    }
    let d0 = avg_prob_over_t_poly(g, &Query::two_point(u, v, 0))?;
    let d1 = avg_prob_over_t_poly(g, &Query::two_point(u, v, 1))?;
    let difference = &d0 - &d1;
    let intervals = isolate_roots_unit(&difference, tol)?;
    let gaps = gap_signs(&difference, &intervals);
    let roots = intervals
        .into_iter()
        .enumerate()
        .map(|(i, interval)| RootReport {
            interval,
            left: gaps[i],
            right: gaps[i + 1],
        })
        .collect();
    Ok(CriticalReport {
        identically_zero: difference.is_zero(),
        difference,
        roots,
    })
}
