//! The tree of base points (proper and infinitely near) with multiplicities and
//! proximity relations.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::germ::{blow_up_ascend, strict_first, strict_second, LinearSystemGerm};
use super::proper::proper_base_points;
use super::{anchor_chart, BubblePoint, BubblePointJson, ChartStep};
use crate::algebra::{MultiPoly, Rational};
use crate::error::{Error, Result};
use crate::plane_map::PlaneMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub point: BubblePoint,
    pub multiplicity: u32,
    pub parent: Option<usize>,
    /// Indices of the nodes this one is proximate to (the parent included).
    pub proximate_to: Vec<usize>,
}

/// Base points in depth-first pre-order: each proper point followed by the points
/// above it, first-chart children by ascending coordinate, then the second-chart one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePointTree {
    pub degree: u32,
    pub nodes: Vec<TreeNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoetherReport {
    pub degree: u32,
    pub sum: i64,
    pub expected_sum: i64,
    pub sum_sq: i64,
    pub expected_sum_sq: i64,
    /// Labels of nodes whose multiplicity is below the sum over the points proximate to them.
    pub proximity_violations: Vec<usize>,
}

impl NoetherReport {
    pub fn equalities_hold(&self) -> bool {
        self.sum == self.expected_sum && self.sum_sq == self.expected_sum_sq
    }

    pub fn passed(&self) -> bool {
        self.equalities_hold() && self.proximity_violations.is_empty()
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TreeNodeJson {
    pub label: String,
    #[serde(flatten)]
    pub point: BubblePointJson,
    pub multiplicity: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TreeEdgeJson {
    pub from: String,
    pub to: String,
    /// `"succession"` (parent to child) or `"proximity"` (satellite relation).
    pub kind: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TreeJson {
    pub degree: u32,
    pub nodes: Vec<TreeNodeJson>,
    pub edges: Vec<TreeEdgeJson>,
}

impl BasePointTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &BubblePoint> {
        self.nodes.iter().map(|n| &n.point)
    }

    pub fn index_of(&self, p: &BubblePoint) -> Option<usize> {
        self.nodes.iter().position(|n| &n.point == p)
    }

    pub fn contains(&self, p: &BubblePoint) -> bool {
        self.index_of(p).is_some()
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.nodes.iter().map(|n| n.multiplicity).collect()
    }

    pub fn children(&self, i: usize) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&j| self.nodes[j].parent == Some(i)).collect()
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&j| self.nodes[j].parent.is_none()).collect()
    }

    /// One proper point with every node having at most one child.
    pub fn is_single_chain(&self) -> bool {
        self.roots().len() == 1 && (0..self.nodes.len()).all(|i| self.children(i).len() <= 1)
    }

    /// Proximities other than to the parent, as `(from, to)`.
    pub fn satellite_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (j, n) in self.nodes.iter().enumerate() {
            for &i in &n.proximate_to {
                if Some(i) != n.parent {
                    out.push((j, i));
                }
            }
        }
        out
    }

    /// Greatest level plus one (0 for an empty tree).
    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.point.level() + 1).max().unwrap_or(0)
    }

    pub fn to_dot(&self, prefix: &str) -> String {
        let mut s = String::from("digraph base_points {\n  rankdir=TB;\n");
        for (i, n) in self.nodes.iter().enumerate() {
            s.push_str(&format!(
                "  {p}{i} [label=\"{p}_{i} (m={m})\"];\n",
                p = prefix,
                i = i + 1,
                m = n.multiplicity
            ));
        }
        for (j, n) in self.nodes.iter().enumerate() {
            if let Some(i) = n.parent {
                s.push_str(&format!("  {p}{} -> {p}{};\n", i + 1, j + 1, p = prefix));
            }
        }
        for (j, i) in self.satellite_edges() {
            s.push_str(&format!("  {p}{} -> {p}{} [style=dashed];\n", j + 1, i + 1, p = prefix));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self, prefix: &str) -> TreeJson {
        let label = |i: usize| format!("{}_{}", prefix, i + 1);
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| TreeNodeJson {
                label: label(i),
                point: n.point.to_json(),
                multiplicity: n.multiplicity,
            })
            .collect();
        let mut edges: Vec<TreeEdgeJson> = self
            .nodes
            .iter()
            .enumerate()
            .filter_map(|(j, n)| {
                n.parent.map(|i| TreeEdgeJson {
                    from: label(i),
                    to: label(j),
                    kind: "succession".into(),
                })
            })
            .collect();
        edges.extend(self.satellite_edges().into_iter().map(|(j, i)| TreeEdgeJson {
            from: label(j),
            to: label(i),
            kind: "proximity".into(),
        }));
        TreeJson {
            degree: self.degree,
            nodes,
            edges,
        }
    }

    /// Rebuilds a tree from its JSON form (proximities are taken from the edges).
    pub fn from_json(j: &TreeJson) -> Result<Self> {
        let index: HashMap<&str, usize> =
            j.nodes.iter().enumerate().map(|(i, n)| (n.label.as_str(), i)).collect();
        let mut nodes: Vec<TreeNode> = j
            .nodes
            .iter()
            .map(|n| {
                Ok(TreeNode {
                    point: BubblePoint::from_json(&n.point)?,
                    multiplicity: n.multiplicity,
                    parent: None,
                    proximate_to: Vec::new(),
                })
            })
            .collect::<Result<_>>()?;
        for e in &j.edges {
            let (Some(&a), Some(&b)) = (index.get(e.from.as_str()), index.get(e.to.as_str())) else {
                return Err(Error::Invalid(format!("edge {} -> {} names an unknown node", e.from, e.to)));
            };
            match e.kind.as_str() {
                "succession" => {
                    nodes[b].parent = Some(a);
                    nodes[b].proximate_to.insert(0, a);
                }
                "proximity" => nodes[a].proximate_to.push(b),
                k => return Err(Error::Invalid(format!("unknown edge kind '{}'", k))),
            }
        }
        Ok(BasePointTree {
            degree: j.degree,
            nodes,
        })
    }
}

pub fn b_count(f: &PlaneMap) -> Result<usize> {
    Ok(base_point_tree(f)?.len())
}

pub fn noether_check(tree: &BasePointTree) -> NoetherReport {
    let d = tree.degree as i64;
    let sum = tree.nodes.iter().map(|n| n.multiplicity as i64).sum();
    let sum_sq = tree.nodes.iter().map(|n| (n.multiplicity as i64).pow(2)).sum();
    let mut load = vec![0i64; tree.nodes.len()];
    for n in &tree.nodes {
        for &i in &n.proximate_to {
            load[i] += n.multiplicity as i64;
        }
    }
    let proximity_violations = (0..tree.nodes.len())
        .filter(|&i| (tree.nodes[i].multiplicity as i64) < load[i])
        .collect();
    NoetherReport {
        degree: tree.degree,
        sum,
        expected_sum: 3 * (d - 1),
        sum_sq,
        expected_sum_sq: d * d - 1,
        proximity_violations,
    }
}

/// The base-point tree, rejected with `NoetherMismatch` unless the multiplicities
/// satisfy both Noether equalities and the proximity inequalities.
pub fn base_point_tree(f: &PlaneMap) -> Result<BasePointTree> {
    let tree = base_point_tree_unchecked(f)?;
    let r = noether_check(&tree);
    if !r.passed() {
        return Err(Error::NoetherMismatch {
            sum: r.sum,
            expected_sum: r.expected_sum,
            sum_sq: r.sum_sq,
            expected_sum_sq: r.expected_sum_sq,
        });
    }
    Ok(tree)
}

struct Short;

/// The base-point tree without the Noether check (usable for non-birational triples).
pub fn base_point_tree_unchecked(f: &PlaneMap) -> Result<BasePointTree> {
    let d = f.degree();
    let proper = proper_base_points(f)?;
    let mut precision = 3 * d + 2;
    loop {
        match build(f, &proper, precision) {
            Ok(nodes) => return Ok(BasePointTree { degree: d, nodes }),
            Err(Ok(Short)) => precision *= 2,
            Err(Err(e)) => return Err(e),
        }
        if precision > 64 * (d + 2) {
            return Err(Error::Invalid("germ precision limit reached while building the tree".into()));
        }
    }
}

struct Pending {
    point: BubblePoint,
    germ: LinearSystemGerm,
    parent: Option<usize>,
    /// Exceptional curves through this point: (node index, local equation).
    divisors: Vec<(usize, MultiPoly)>,
}

fn build(
    f: &PlaneMap,
    proper: &[(crate::plane_map::ProjPoint, u32)],
    precision: u32,
) -> std::result::Result<Vec<TreeNode>, Result<Short>> {
    let node_limit = 3 * f.degree() as usize + 3;
    let mut nodes: Vec<TreeNode> = Vec::new();
    let mut stack: Vec<Pending> = Vec::new();
    for (p, _) in proper.iter().rev() {
        let s = anchor_chart(p);
        let comps = f.components().clone().map(|c| c.substitute(&s));
        stack.push(Pending {
            point: BubblePoint::proper(p.clone()),
            germ: LinearSystemGerm::truncated(comps, precision),
            parent: None,
            divisors: Vec::new(),
        });
    }
    while let Some(item) = stack.pop() {
        if item.germ.is_underdetermined() {
            return Err(Ok(Short));
        }
        let ascent = blow_up_ascend(&item.germ).map_err(Err)?;
        let idx = nodes.len();
        if idx >= node_limit {
            return Err(Err(Error::Invalid("base-point tree exceeds the Noether bound".into())));
        }
        nodes.push(TreeNode {
            point: item.point.clone(),
            multiplicity: ascent.multiplicity,
            parent: item.parent,
            proximate_to: item.divisors.iter().map(|(i, _)| *i).collect(),
        });
        let mut children = Vec::new();
        for c in &ascent.first_points {
            let mut divisors = vec![(idx, MultiPoly::x())];
            divisors.extend(
                item.divisors
                    .iter()
                    .map(|(i, h)| (*i, strict_first(h, c)))
                    .filter(|(_, h)| h.constant_term() == Rational::from_integer(0.into())),
            );
            children.push(Pending {
                point: item.point.child(ChartStep::First(c.clone())),
                germ: ascent.first.translate(c),
                parent: Some(idx),
                divisors,
            });
        }
        if ascent.second_origin {
            let mut divisors = vec![(idx, MultiPoly::y())];
            divisors.extend(
                item.divisors
                    .iter()
                    .map(|(i, h)| (*i, strict_second(h)))
                    .filter(|(_, h)| h.constant_term() == Rational::from_integer(0.into())),
            );
            children.push(Pending {
                point: item.point.child(ChartStep::Second),
                germ: ascent.second.clone(),
                parent: Some(idx),
                divisors,
            });
        }
        for c in children.into_iter().rev() {
            stack.push(c);
        }
    }
    for n in nodes.iter_mut() {
        n.proximate_to.sort_unstable_by(|a, b| b.cmp(a));
    }
    Ok(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_map::inverse::inverse;

    fn psi() -> PlaneMap {
        PlaneMap::parse("(x^2*y*z^2 - z^5 + x^5 : x^2*(x^2*y - z^3) : x*z*(x^2*y - z^3))").unwrap()
    }

    #[test]
    fn chain_over_one_point() {
        let t = base_point_tree(&psi()).unwrap();
        assert_eq!(t.len(), 9);
        assert!(t.is_single_chain());
        assert_eq!(t.multiplicities(), vec![4, 1, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(t.satellite_edges(), vec![(2, 0)]);
        assert_eq!(t.nodes[0].point.to_string(), "(0:1:0)");
        let r = noether_check(&t);
        assert_eq!((r.sum, r.sum_sq), (12, 24));
    }

    #[test]
    fn inverse_chain() {
        let t = base_point_tree(&inverse(&psi()).unwrap()).unwrap();
        assert_eq!(t.len(), 9);
        assert!(t.is_single_chain());
        assert!(t.satellite_edges().is_empty());
        assert_eq!(t.nodes[0].point.to_string(), "(1:0:0)");
    }

    #[test]
    fn quadratic_has_three_proper_points() {
        let t = base_point_tree(&PlaneMap::parse("(y*z : x*z : x*y)").unwrap()).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.nodes.iter().all(|n| n.point.is_proper() && n.multiplicity == 1));
        assert!(base_point_tree(&PlaneMap::identity()).unwrap().is_empty());
    }

    #[test]
    fn json_round_trip_and_dot() {
        let t = base_point_tree(&psi()).unwrap();
        let j = t.to_json("p");
        assert_eq!(BasePointTree::from_json(&j).unwrap(), t);
        let dot = t.to_dot("p");
        assert!(dot.contains("p1 [label=\"p_1 (m=4)\"]"));
        assert!(dot.contains("p3 -> p1 [style=dashed]"));
    }

    #[test]
    fn non_birational_triple_fails_noether() {
        let f = PlaneMap::parse("(x^2 : y^2 : z^2)").unwrap();
        assert!(base_point_tree_unchecked(&f).unwrap().is_empty());
        assert!(matches!(base_point_tree(&f), Err(Error::NoetherMismatch { .. })));
    }
}
