//! Points of the plane and points infinitely near them, base-point trees and the
//! transport of points by birational maps.
//!
//! Chart conventions. At a proper point with first nonzero coordinate index `k`
//! (scaled to 1), local coordinates `(u, v)` are the other two coordinates, in
//! index order, minus those of the point. Blowing up the origin of `(u, v)` gives
//! two charts: the first `(u, v) = (u', u'(v' + c))`, whose points on the
//! exceptional line `u' = 0` are recorded as `First(c)`, and the second
//! `(u, v) = (u'v', v')`, whose origin, the one point missing from the first
//! chart, is recorded as `Second`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{MultiPoly, Rational};
use crate::error::{Error, Result};
use crate::plane_map::ProjPoint;

pub mod germ;
pub mod proper;
pub mod transport;
pub mod tree;

pub use germ::{blow_up_ascend, LinearSystemGerm};
pub use proper::proper_base_points;
pub use transport::{composition_functoriality_check, push_forward_point, ResolvedMap, Transported};
pub use tree::{b_count, base_point_tree, base_point_tree_unchecked, noether_check, BasePointTree, NoetherReport, TreeNode};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChartStep {
    First(Rational),
    Second,
}

impl fmt::Display for ChartStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartStep::First(c) => write!(f, "first:{}", c),
            ChartStep::Second => write!(f, "second"),
        }
    }
}

impl fmt::Debug for ChartStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl ChartStep {
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "second" {
            return Ok(ChartStep::Second);
        }
        t.strip_prefix("first:")
            .and_then(crate::algebra::rational::parse_rational)
            .map(ChartStep::First)
            .ok_or_else(|| Error::Invalid(format!("bad chart step '{}'", t)))
    }
}

/// A proper point together with the chart records of each blow-up above it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BubblePoint {
    pub anchor: ProjPoint,
    pub tower: Vec<ChartStep>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct BubblePointJson {
    pub anchor: String,
    pub tower: Vec<String>,
}

impl BubblePoint {
    pub fn proper(anchor: ProjPoint) -> Self {
        BubblePoint {
            anchor,
            tower: Vec::new(),
        }
    }

    pub fn new(anchor: ProjPoint, tower: Vec<ChartStep>) -> Self {
        BubblePoint { anchor, tower }
    }

    pub fn level(&self) -> usize {
        self.tower.len()
    }

    pub fn is_proper(&self) -> bool {
        self.tower.is_empty()
    }

    /// The point one level down (`None` for a proper point).
    pub fn parent(&self) -> Option<BubblePoint> {
        if self.tower.is_empty() {
            return None;
        }
        Some(BubblePoint {
            anchor: self.anchor.clone(),
            tower: self.tower[..self.tower.len() - 1].to_vec(),
        })
    }

    pub fn child(&self, step: ChartStep) -> BubblePoint {
        let mut tower = self.tower.clone();
        tower.push(step);
        BubblePoint {
            anchor: self.anchor.clone(),
            tower,
        }
    }

    /// True if `self` is `other` or infinitely near it.
    pub fn is_above_or_equal(&self, other: &BubblePoint) -> bool {
        self.anchor == other.anchor
            && self.tower.len() >= other.tower.len()
            && self.tower[..other.tower.len()] == other.tower[..]
    }

    pub fn to_json(&self) -> BubblePointJson {
        BubblePointJson {
            anchor: self.anchor.to_string(),
            tower: self.tower.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn from_json(j: &BubblePointJson) -> Result<Self> {
        Ok(BubblePoint {
            anchor: ProjPoint::parse(&j.anchor)?,
            tower: j.tower.iter().map(|s| ChartStep::parse(s)).collect::<Result<_>>()?,
        })
    }

    /// Substitution taking local coordinates `(u, v)` at the anchor (as variables
    /// x and y of the result) to homogeneous coordinates with the anchor coordinate 1.
    pub fn anchor_chart(&self) -> [MultiPoly; 3] {
        anchor_chart(&self.anchor)
    }
}

pub(crate) fn anchor_chart(anchor: &ProjPoint) -> [MultiPoly; 3] {
    let k = anchor.anchor_index();
    let c = anchor.coords();
    let mut s: [MultiPoly; 3] = Default::default();
    let mut local = 0;
    for (i, slot) in s.iter_mut().enumerate() {
        if i == k {
            *slot = MultiPoly::one();
        } else {
            *slot = &MultiPoly::var(local) + &MultiPoly::constant(c[i].clone());
            local += 1;
        }
    }
    s
}

impl fmt::Display for BubblePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.anchor)?;
        for s in &self.tower {
            write!(f, " > {}", s)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BubblePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn json_round_trip() {
        let p = BubblePoint::new(
            ProjPoint::from_ints([0, 1, 0]).unwrap(),
            vec![ChartStep::Second, ChartStep::First(rat(-3)), ChartStep::First(Rational::new(1.into(), 2.into()))],
        );
        assert_eq!(p.level(), 3);
        assert_eq!(BubblePoint::from_json(&p.to_json()).unwrap(), p);
        assert_eq!(p.to_string(), "(0:1:0) > second > first:-3 > first:1/2");
        assert!(p.is_above_or_equal(&p.parent().unwrap()));
    }

    #[test]
    fn chart_at_anchor() {
        let s = BubblePoint::proper(ProjPoint::from_ints([0, 1, 0]).unwrap()).anchor_chart();
        assert_eq!(s[0].to_string(), "x");
        assert_eq!(s[1].to_string(), "1");
        assert_eq!(s[2].to_string(), "y");
    }
}
