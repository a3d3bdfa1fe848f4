//! Dyadic covering of a planar density: split squares with mass >= 8 into
//! four, mark squares with mass in [2, 8) as B and the rest as A, refine the
//! A class into A1 (near-constant) and A2 (non-constant), and assemble the
//! anyon Lieb-Thirring lower bound from the local pieces.

use crate::bounds::BoundReport;
use crate::density::DensityGrid;
use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};
use serde_json::json;

/// The constants of the local uncertainty inequality. No numeric values are
/// pinned by theory here; the shipped defaults are illustrative and every
/// report echoes the constants actually used.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct UncertaintyConstants {
    pub c1: f64,
    pub c2: f64,
}

impl Default for UncertaintyConstants {
    fn default() -> Self {
        Self { c1: 0.5, c2: 4.0 }
    }
}

impl UncertaintyConstants {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if !(c1 > 0.0 && c2 > c1) {
            return Err(CoreError::Config(format!(
                "uncertainty constants need c2 > c1 > 0, got c1={c1}, c2={c2}"
            )));
        }
        Ok(Self { c1, c2 })
    }

    /// A2 membership threshold factor 2 c2 / c1.
    pub fn a2_factor(&self) -> f64 {
        2.0 * self.c2 / self.c1
    }
}

/// The primed constants of the B-square bound. Defaults are tied to the
/// uncertainty constants so that the A1-domination step holds: with
/// c2' = c1/4 and c3' = c1^2/(128 c2), the verified association-sum bound
/// sum s <= (32 c2/c1)/|Q_B| gives c3' * sum s <= c2'/|Q_B|.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PrimedConstants {
    pub c1p: f64,
    pub c2p: f64,
    pub c3p: f64,
}

impl PrimedConstants {
    pub fn from_uncertainty(u: &UncertaintyConstants) -> Self {
        Self {
            c1p: u.c1 / 2.0,
            c2p: u.c1 / 4.0,
            c3p: u.c1 * u.c1 / (128.0 * u.c2),
        }
    }
}

/// Mass thresholds of the splitting rule. The (2, 8) values come from the
/// covering argument; override only in expert mode.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CoverThresholds {
    /// squares with mass below this are A
    pub b_min: f64,
    /// squares with mass at or above this are split
    pub split: f64,
}

impl Default for CoverThresholds {
    fn default() -> Self {
        Self { b_min: 2.0, split: 8.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    Internal,
    /// unclassified A-leaf (mass < 2), before classify_a has run
    A,
    A1,
    A2,
    B,
}

#[derive(Debug, Clone, Serialize)]
pub struct Node {
    pub origin: (f64, f64),
    pub side: f64,
    /// cell-corner and size of the subsquare in grid cells
    pub ix: usize,
    pub iy: usize,
    pub size: usize,
    /// ∫_Q ρ
    pub mass: f64,
    /// ∫_Q ρ²
    pub second_moment: f64,
    pub label: Label,
    pub depth: usize,
    pub parent: Option<usize>,
    pub children: Option<[usize; 4]>,
}

/// The covering tree. Construction is sequential with fixed child order
/// (row-major quadrants), so identical inputs give bit-identical trees.
#[derive(Debug, Clone)]
pub struct CoverTree {
    nodes: Vec<Node>,
    total_mass: f64,
    total_second_moment: f64,
}

impl CoverTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn total_second_moment(&self) -> f64 {
        self.total_second_moment
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].children.is_none())
    }

    pub fn b_leaves(&self) -> Vec<usize> {
        self.leaves().filter(|&i| self.nodes[i].label == Label::B).collect()
    }

    /// Nested JSON export: square coordinates, moments and label per node.
    pub fn to_json(&self) -> serde_json::Value {
        self.node_json(0)
    }

    fn node_json(&self, idx: usize) -> serde_json::Value {
        let n = &self.nodes[idx];
        let children: Vec<serde_json::Value> = match n.children {
            Some(c) => c.iter().map(|&k| self.node_json(k)).collect(),
            None => Vec::new(),
        };
        json!({
            "x": n.origin.0,
            "y": n.origin.1,
            "side": n.side,
            "mass": n.mass,
            "second_moment": n.second_moment,
            "label": n.label,
            "children": children,
        })
    }
}

/// Build the covering tree with the default (2, 8) thresholds.
pub fn build_tree(rho: &DensityGrid) -> Result<CoverTree> {
    build_tree_with(rho, CoverThresholds::default())
}

pub fn build_tree_with(rho: &DensityGrid, thresholds: CoverThresholds) -> Result<CoverTree> {
    let (m, s) = rho.moments_on(0, 0, rho.n());
    if m < thresholds.b_min {
        return Err(CoreError::DegenerateCover { mass: m });
    }
    let mut tree = CoverTree {
        nodes: Vec::new(),
        total_mass: m,
        total_second_moment: s,
    };
    tree.nodes.push(Node {
        origin: rho.origin(),
        side: rho.side(),
        ix: 0,
        iy: 0,
        size: rho.n(),
        mass: m,
        second_moment: s,
        label: Label::Internal, // fixed up below
        depth: 0,
        parent: None,
        children: None,
    });
    split_node(&mut tree, 0, rho, thresholds)?;
    Ok(tree)
}

fn split_node(
    tree: &mut CoverTree,
    idx: usize,
    rho: &DensityGrid,
    th: CoverThresholds,
) -> Result<()> {
    let mass = tree.nodes[idx].mass;
    if mass < th.b_min {
        tree.nodes[idx].label = Label::A;
        return Ok(());
    }
    if mass < th.split {
        tree.nodes[idx].label = Label::B;
        return Ok(());
    }
    let (size, ix, iy, origin, side, depth) = {
        let n = &tree.nodes[idx];
        (n.size, n.ix, n.iy, n.origin, n.side, n.depth)
    };
    if size == 1 {
        return Err(CoreError::Refinement(format!(
            "cell at ({ix}, {iy}) holds mass {mass} >= {}, increase grid resolution",
            th.split
        )));
    }
    tree.nodes[idx].label = Label::Internal;
    let half = size / 2;
    let half_side = side / 2.0;
    let mut children = [0usize; 4];
    for k in 0..4 {
        let dx = k % 2;
        let dy = k / 2;
        let cx = ix + dx * half;
        let cy = iy + dy * half;
        let (m, s) = rho.moments_on(cx, cy, half);
        let child = Node {
            origin: (
                origin.0 + dx as f64 * half_side,
                origin.1 + dy as f64 * half_side,
            ),
            side: half_side,
            ix: cx,
            iy: cy,
            size: half,
            mass: m,
            second_moment: s,
            label: Label::A,
            depth: depth + 1,
            parent: Some(idx),
            children: None,
        };
        tree.nodes.push(child);
        children[k] = tree.nodes.len() - 1;
    }
    tree.nodes[idx].children = Some(children);
    for k in 0..4 {
        split_node(tree, children[k], rho, th)?;
    }
    Ok(())
}

/// Relabel every A-leaf as A2 when ∫ρ² > (2c2/c1)(∫ρ)²/|Q|, else A1.
pub fn classify_a(tree: &mut CoverTree, consts: &UncertaintyConstants) {
    let factor = consts.a2_factor();
    for node in tree.nodes.iter_mut() {
        if node.children.is_some() {
            continue;
        }
        if matches!(node.label, Label::A | Label::A1 | Label::A2) {
            let area = node.side * node.side;
            let threshold = factor * node.mass * node.mass / area;
            node.label = if node.second_moment > threshold { Label::A2 } else { Label::A1 };
        }
    }
}

/// The association set of a B-leaf: every A1-leaf found by stepping
/// backwards through the strict ancestors of `qb` and then one step
/// forward, i.e. the direct children of each strict ancestor that are
/// A1 leaves.
pub fn a1_association(tree: &CoverTree, qb: usize) -> Result<Vec<usize>> {
    let node = &tree.nodes()[qb];
    if node.children.is_some() || node.label != Label::B {
        return Err(CoreError::Validation(format!("node {qb} is not a B-leaf")));
    }
    let mut out = Vec::new();
    let mut cur = node.parent;
    while let Some(p) = cur {
        let parent = &tree.nodes()[p];
        if let Some(children) = parent.children {
            for c in children {
                let child = &tree.nodes()[c];
                if child.children.is_none() && child.label == Label::A1 {
                    out.push(c);
                }
            }
        }
        cur = parent.parent;
    }
    Ok(out)
}

/// Per-B-leaf check of the association-sum bound
/// sum_{Q in A1(Q_B)} ∫_Q ρ² <= (32 c2/c1) / |Q_B|.
#[derive(Debug, Clone, Serialize)]
pub struct A1SumReport {
    pub b_leaf: usize,
    pub sum: f64,
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
}

pub fn verify_a1_sum(
    tree: &CoverTree,
    consts: &UncertaintyConstants,
) -> Result<Vec<A1SumReport>> {
    let mut reports = Vec::new();
    for qb in tree.b_leaves() {
        let assoc = a1_association(tree, qb)?;
        let sum: f64 = assoc.iter().map(|&i| tree.nodes()[i].second_moment).sum();
        let area = tree.nodes()[qb].side * tree.nodes()[qb].side;
        let bound = 32.0 * consts.c2 / consts.c1 / area;
        reports.push(A1SumReport {
            b_leaf: qb,
            sum,
            bound,
            margin: bound - sum,
            pass: sum <= bound,
        });
    }
    Ok(reports)
}

/// Local uncertainty right-hand side on a single square/interval:
/// c1 (∫ρ^{1+2/d})/(∫ρ)^{2/d} - c2 (∫ρ)/|Q|^{2/d}.
///
/// For d = 2 `moment` is ∫ρ², for d = 1 it is the cubic moment ∫ρ³ and
/// `extent` the interval length.
pub fn local_uncertainty_rhs(
    mass: f64,
    moment: f64,
    extent: f64,
    consts: &UncertaintyConstants,
    d: u8,
) -> Result<f64> {
    if mass == 0.0 {
        return Ok(0.0);
    }
    match d {
        2 => Ok(consts.c1 * moment / mass - consts.c2 * mass / extent),
        1 => Ok(consts.c1 * moment / (mass * mass) - consts.c2 * mass / (extent * extent)),
        _ => Err(CoreError::Domain(format!("local uncertainty needs d in {{1,2}}, got {d}"))),
    }
}

/// Assemble the anyon kinetic-energy lower bound from a classified tree:
/// sum over B-leaves of ξ²(c1' ∫ρ² + c2'/|Q|) plus the A2 uncertainty
/// terms (c1/4) ∫ρ². The report also carries the simplified global form
/// C_eff ξ² ∫ρ² with C_eff = min(c1', c3', c1/4) for comparison.
pub fn assemble_anyon_bound(
    tree: &CoverTree,
    xi: f64,
    consts: &UncertaintyConstants,
    primed: &PrimedConstants,
) -> Result<BoundReport> {
    if xi < 0.0 || !xi.is_finite() {
        return Err(CoreError::Domain(format!("xi must be finite and >= 0, got {xi}")));
    }
    let xi2 = xi * xi;
    let mut b_sum = 0.0;
    let mut b_rho2 = 0.0;
    let mut a2_sum = 0.0;
    for i in tree.leaves() {
        let node = &tree.nodes()[i];
        match node.label {
            Label::B => {
                let area = node.side * node.side;
                b_sum += xi2 * (primed.c1p * node.second_moment + primed.c2p / area);
                b_rho2 += node.second_moment;
            }
            Label::A2 => {
                a2_sum += consts.c1 / 4.0 * node.second_moment;
            }
            _ => {}
        }
    }
    let c_eff = primed.c1p.min(primed.c3p).min(consts.c1 / 4.0);
    let global = c_eff * xi2 * tree.total_second_moment();
    let mut flags = Vec::new();
    if xi == 0.0 {
        flags.push("bosonic: xi = 0, B-square exclusion terms vanish".to_string());
    }
    Ok(BoundReport {
        kind: "anyon-covering".into(),
        value: b_sum + a2_sum,
        constants: json!({
            "c1": consts.c1, "c2": consts.c2,
            "c1p": primed.c1p, "c2p": primed.c2p, "c3p": primed.c3p,
            "c_eff": c_eff,
        }),
        inputs: json!({
            "xi": xi,
            "total_mass": tree.total_mass(),
            "total_second_moment": tree.total_second_moment(),
            "b_leaves": tree.b_leaves().len(),
        }),
        details: json!({
            "b_square_sum": b_sum,
            "b_square_rho2": b_rho2,
            "a2_sum": a2_sum,
            "global_form": global,
        }),
        flags,
    })
}

/// Convenience wrapper: build, classify and assemble; a degenerate cover
/// (mass < 2) yields a zero bound with a flag instead of an error.
pub fn anyon_bound_from_grid(
    rho: &DensityGrid,
    xi: f64,
    consts: &UncertaintyConstants,
    primed: &PrimedConstants,
) -> Result<(Option<CoverTree>, BoundReport)> {
    match build_tree(rho) {
        Ok(mut tree) => {
            classify_a(&mut tree, consts);
            let report = assemble_anyon_bound(&tree, xi, consts, primed)?;
            Ok((Some(tree), report))
        }
        Err(CoreError::DegenerateCover { mass }) => Ok((
            None,
            BoundReport {
                kind: "anyon-covering".into(),
                value: 0.0,
                constants: json!({"c1": consts.c1, "c2": consts.c2}),
                inputs: json!({"xi": xi, "total_mass": mass}),
                details: json!({}),
                flags: vec![format!("degenerate cover: total mass {mass} < 2")],
            },
        )),
        Err(e) => Err(e),
    }
}

/// Structural checks used by the verification suites: exact tiling (area
/// and mass accounting) and the branch property (every internal node has a
/// B-leaf descendant).
pub fn check_structure(tree: &CoverTree) -> Result<()> {
    let root = tree.root();
    let mut leaf_mass = 0.0;
    let mut leaf_area = 0.0;
    for i in tree.leaves() {
        leaf_mass += tree.nodes()[i].mass;
        leaf_area += tree.nodes()[i].side * tree.nodes()[i].side;
    }
    let area = root.side * root.side;
    if (leaf_area - area).abs() > 1e-10 * area {
        return Err(CoreError::Validation(format!(
            "leaf areas sum to {leaf_area}, root area is {area}"
        )));
    }
    if (leaf_mass - root.mass).abs() > 1e-10 * root.mass.max(1.0) {
        return Err(CoreError::Validation(format!(
            "leaf masses sum to {leaf_mass}, root mass is {}",
            root.mass
        )));
    }
    for (i, node) in tree.nodes().iter().enumerate() {
        if node.children.is_some() && !has_b_descendant(tree, i) {
            return Err(CoreError::Validation(format!(
                "internal node {i} has no B-leaf descendant"
            )));
        }
    }
    Ok(())
}

fn has_b_descendant(tree: &CoverTree, idx: usize) -> bool {
    let node = &tree.nodes()[idx];
    match node.children {
        None => node.label == Label::B,
        Some(children) => children.iter().any(|&c| has_b_descendant(tree, c)),
    }
}
