//! Hoeffding adaptive tree classifier.
//!
//! Leaves keep per-class Gaussian statistics for every numeric feature and
//! attempt a binary split each time `grace_period` weight has accumulated.
//! Every node monitors its 0/1 error with ADWIN; when the error of a split
//! node rises an alternate subtree is grown in its place and swapped in
//! once it is significantly better, or discarded if it is significantly
//! worse.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::mem::size_of;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::adwin::{Adwin, DriftDetector, DEFAULT_DELTA};
use super::arf::FeatureBudget;
use super::dump::{DumpNode, TreeDump};
use super::hoeffding::{hoeffding_bound, GaussianEstimator};
use super::{Classifier, Label, Proba};
use crate::features::FeatureVector;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HatcParams {
    /// `None` lets the tree grow without a depth limit.
    pub max_depth: Option<u32>,
    pub tie_threshold: f64,
    /// Memory budget in MB (10^6 bytes) for the estimated tree size.
    pub max_size_mb: f64,
    pub grace_period: f64,
    pub split_confidence: f64,
    pub drift_delta: f64,
}

impl HatcParams {
    /// depth = 200, tie_threshold = 0.005, max_size = 200.
    pub const fn best_known() -> Self {
        HatcParams {
            max_depth: Some(200),
            tie_threshold: 0.005,
            max_size_mb: 200.0,
            grace_period: 200.0,
            split_confidence: 1e-7,
            drift_delta: DEFAULT_DELTA,
        }
    }

    pub fn with_grid(max_depth: Option<u32>, tie_threshold: f64, max_size_mb: f64) -> Self {
        HatcParams {
            max_depth,
            tie_threshold,
            max_size_mb,
            ..Self::best_known()
        }
    }

    fn max_bytes(&self) -> f64 {
        self.max_size_mb * 1e6
    }
}

impl Default for HatcParams {
    fn default() -> Self {
        Self::best_known()
    }
}

// swap / discard test for alternates
const ALT_MIN_WIDTH: u64 = 300;
const ALT_DELTA: f64 = 0.05;
// a split needs at least two branches holding this fraction of the weight
const MIN_BRANCH_FRACTION: f64 = 0.01;
const SPLIT_POINTS: usize = 10;

const NODE_BYTES: usize = 256;
const STAT_BYTES: usize = size_of::<[GaussianEstimator; 2]>() + 64;

/// Feature, threshold and the `[branch][class]` weights of a split.
type Candidate<'a> = (&'a str, f64, [[f64; 2]; 2]);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Subspace {
    /// Drawn at the leaf's first update.
    Pending,
    All,
    Only(BTreeSet<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Leaf {
    depth: u32,
    /// Includes the distribution inherited from the parent split.
    class_counts: [f64; 2],
    /// Weight learned at this leaf only.
    observed: [f64; 2],
    weight_at_last_eval: f64,
    stats: BTreeMap<String, [GaussianEstimator; 2]>,
    subspace: Subspace,
    errors: Adwin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Split {
    depth: u32,
    feature: String,
    threshold: f64,
    children: [Node; 2],
    branch_weight: [f64; 2],
    class_counts: [f64; 2],
    errors: Adwin,
    alternate: Option<Box<Node>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf(Leaf),
    Split(Box<Split>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SubspaceSampler {
    budget: FeatureBudget,
    rng: ChaCha8Rng,
}

impl SubspaceSampler {
    fn draw(&mut self, x: &FeatureVector) -> Subspace {
        let n = x.len();
        let k = self.budget.resolve(n);
        if k >= n {
            return Subspace::All;
        }
        let ids: Vec<&str> = x.ids().collect();
        let picked = rand::seq::index::sample(&mut self.rng, n, k);
        Subspace::Only(picked.into_iter().map(|i| String::from(ids[i])).collect())
    }
}

/// Counters describing how the tree has adapted so far.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub splits: u64,
    pub alternates_created: u64,
    pub alternates_swapped: u64,
    pub alternates_discarded: u64,
    pub splits_blocked_by_memory: u64,
}

struct Ctx<'a> {
    params: &'a HatcParams,
    sampler: Option<&'a mut SubspaceSampler>,
    bytes: usize,
    stats: &'a mut TreeStats,
}

impl Leaf {
    fn new(depth: u32, class_counts: [f64; 2], subspace: Subspace, delta: f64) -> Self {
        Leaf {
            depth,
            class_counts,
            observed: [0.0; 2],
            weight_at_last_eval: 0.0,
            stats: BTreeMap::new(),
            subspace,
            errors: Adwin::new(delta),
        }
    }

    fn proba(&self) -> Proba {
        Proba::from_weights(self.class_counts)
    }

    fn bytes(&self) -> usize {
        let sub = match &self.subspace {
            Subspace::Only(s) => s.len() * 48,
            _ => 0,
        };
        NODE_BYTES + self.stats.len() * STAT_BYTES + sub
    }

    fn observe(&mut self, id: &str, v: f64, c: usize, w: f64, ctx: &mut Ctx) {
        if let Some(e) = self.stats.get_mut(id) {
            e[c].add(v, w);
        } else if (ctx.bytes + STAT_BYTES) as f64 <= ctx.params.max_bytes() {
            let mut e = [GaussianEstimator::default(); 2];
            e[c].add(v, w);
            self.stats.insert(id.into(), e);
            ctx.bytes += STAT_BYTES;
        }
    }

    fn learn(&mut self, x: &FeatureVector, y: Label, w: f64, ctx: &mut Ctx) {
        if self.subspace == Subspace::Pending {
            self.subspace = match ctx.sampler.as_deref_mut() {
                Some(s) => s.draw(x),
                None => Subspace::All,
            };
            if let Subspace::Only(s) = &self.subspace {
                ctx.bytes += s.len() * 48;
            }
        }
        let c = y.index();
        self.class_counts[c] += w;
        self.observed[c] += w;
        let subspace = core::mem::replace(&mut self.subspace, Subspace::All);
        match &subspace {
            Subspace::Only(ids) => {
                for id in ids {
                    if let Some(v) = x.get(id) {
                        self.observe(id, v, c, w, ctx);
                    }
                }
            }
            _ => {
                for (id, v) in x.iter() {
                    self.observe(id, v, c, w, ctx);
                }
            }
        }
        self.subspace = subspace;
    }

    /// Best binary split of `feature`: (merit, threshold, post-split class
    /// weights per branch).
    fn best_split_for(&self, est: &[GaussianEstimator; 2]) -> Option<(f64, f64, [[f64; 2]; 2])> {
        let lo = est
            .iter()
            .filter_map(GaussianEstimator::min)
            .reduce(f64::min)?;
        let hi = est
            .iter()
            .filter_map(GaussianEstimator::max)
            .reduce(f64::max)?;
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
        if !(hi > lo) {
            return None;
        }
        let total = self.observed[0] + self.observed[1];
        let missing = [0, 1].map(|c| (self.observed[c] - est[c].weight()).max(0.0));
        let pre = math::entropy2(self.observed);
        let step = (hi - lo) / (SPLIT_POINTS + 1) as f64;
        let mut best: Option<(f64, f64, [[f64; 2]; 2])> = None;
        for i in 0..SPLIT_POINTS {
            let t = lo + step * (i + 1) as f64;
            if !(t > lo && t < hi) {
                continue;
            }
            let mut left = [0.0; 2];
            let mut right = [0.0; 2];
            for c in 0..2 {
                left[c] = est[c].weight_at_or_below(t);
                right[c] = est[c].weight() - left[c];
            }
            let lw = left[0] + left[1];
            let rw = right[0] + right[1];
            let side = if lw >= rw { &mut left } else { &mut right };
            side[0] += missing[0];
            side[1] += missing[1];
            let lw = left[0] + left[1];
            let rw = right[0] + right[1];
            let big = [lw, rw]
                .iter()
                .filter(|&&b| b > MIN_BRANCH_FRACTION * total)
                .count();
            if big < 2 {
                continue;
            }
            let post = (lw * math::entropy2(left) + rw * math::entropy2(right)) / total;
            let merit = pre - post;
            if best.is_none_or(|(m, _, _)| merit > m) {
                best = Some((merit, t, [left, right]));
            }
        }
        best
    }

    /// Returns the split to install, if the leaf is due and the evidence
    /// supports one.
    fn try_split(&mut self, ctx: &mut Ctx) -> Option<(String, f64, [[f64; 2]; 2])> {
        let total = self.observed[0] + self.observed[1];
        if total - self.weight_at_last_eval < ctx.params.grace_period {
            return None;
        }
        self.weight_at_last_eval = total;
        if self.observed[0] <= 0.0 || self.observed[1] <= 0.0 {
            return None;
        }
        if ctx.params.max_depth.is_some_and(|d| self.depth >= d) {
            return None;
        }
        // the null split (no split) has merit 0
        let mut best: (f64, Option<Candidate<'_>>) = (0.0, None);
        let mut second = f64::NEG_INFINITY;
        for (id, est) in &self.stats {
            if let Some((merit, t, post)) = self.best_split_for(est) {
                if merit > best.0 {
                    second = best.0;
                    best = (merit, Some((id.as_str(), t, post)));
                } else if merit > second {
                    second = merit;
                }
            }
        }
        if best.1.is_some() && second == f64::NEG_INFINITY {
            second = 0.0;
        }
        let (merit, Some((id, t, post))) = best else {
            return None;
        };
        let bound = hoeffding_bound(1.0, ctx.params.split_confidence, total).ok()?;
        if !(merit - second > bound || bound < ctx.params.tie_threshold) {
            return None;
        }
        let grown = ctx.bytes + 2 * NODE_BYTES + NODE_BYTES;
        if (grown.saturating_sub(self.bytes())) as f64 > ctx.params.max_bytes() {
            ctx.stats.splits_blocked_by_memory += 1;
            return None;
        }
        Some((id.into(), t, post))
    }
}

impl Split {
    fn branch(&self, x: &FeatureVector) -> usize {
        match x.get(&self.feature) {
            Some(v) if v <= self.threshold => 0,
            Some(_) => 1,
            None if self.branch_weight[0] >= self.branch_weight[1] => 0,
            None => 1,
        }
    }
}

enum AltAction {
    Keep,
    Swap,
    Discard,
}

impl Node {
    fn errors(&self) -> &Adwin {
        match self {
            Node::Leaf(l) => &l.errors,
            Node::Split(s) => &s.errors,
        }
    }

    fn leaf_for(&self, x: &FeatureVector) -> &Leaf {
        let mut at = self;
        loop {
            match at {
                Node::Leaf(l) => return l,
                Node::Split(s) => at = &s.children[s.branch(x)],
            }
        }
    }

    fn bytes(&self) -> usize {
        match self {
            Node::Leaf(l) => l.bytes(),
            Node::Split(s) => {
                NODE_BYTES
                    + s.children.iter().map(Node::bytes).sum::<usize>()
                    + s.alternate.as_ref().map_or(0, |a| a.bytes())
            }
        }
    }

    fn learn(&mut self, x: &FeatureVector, y: Label, w: f64, ctx: &mut Ctx) {
        let correct = self.leaf_for(x).proba().argmax() == y;
        let err = if correct { 0.0 } else { 1.0 };
        match self {
            Node::Leaf(leaf) => {
                leaf.errors.update(err);
                leaf.learn(x, y, w, ctx);
                if let Some((feature, threshold, post)) = leaf.try_split(ctx) {
                    ctx.stats.splits += 1;
                    let depth = leaf.depth;
                    let pending = if ctx.sampler.is_some() {
                        Subspace::Pending
                    } else {
                        Subspace::All
                    };
                    let delta = ctx.params.drift_delta;
                    let children = [
                        Node::Leaf(Leaf::new(depth + 1, post[0], pending.clone(), delta)),
                        Node::Leaf(Leaf::new(depth + 1, post[1], pending, delta)),
                    ];
                    ctx.bytes = ctx.bytes + 3 * NODE_BYTES - leaf.bytes().min(ctx.bytes);
                    let split = Split {
                        depth,
                        feature,
                        threshold,
                        children,
                        branch_weight: [post[0][0] + post[0][1], post[1][0] + post[1][1]],
                        class_counts: leaf.class_counts,
                        errors: core::mem::take(&mut leaf.errors),
                        alternate: None,
                    };
                    *self = Node::Split(Box::new(split));
                }
            }
            Node::Split(s) => {
                let before = s.errors.estimation();
                let worse = s.errors.update(err) && before < s.errors.estimation();
                s.class_counts[y.index()] += w;
                let mut action = AltAction::Keep;
                match &s.alternate {
                    None if worse => {
                        let sub = if ctx.sampler.is_some() {
                            Subspace::Pending
                        } else {
                            Subspace::All
                        };
                        s.alternate = Some(Box::new(Node::Leaf(Leaf::new(
                            s.depth,
                            [0.0; 2],
                            sub,
                            ctx.params.drift_delta,
                        ))));
                        ctx.bytes += NODE_BYTES;
                        ctx.stats.alternates_created += 1;
                    }
                    Some(alt) => {
                        let (aw, ow) = (alt.errors().width(), s.errors.width());
                        if aw > ALT_MIN_WIDTH && ow > ALT_MIN_WIDTH {
                            let old = s.errors.estimation();
                            let new = alt.errors().estimation();
                            let n = 1.0 / aw as f64 + 1.0 / ow as f64;
                            let bound =
                                math::sqrt(2.0 * old * (1.0 - old) * math::ln(2.0 / ALT_DELTA) * n);
                            if bound < old - new {
                                action = AltAction::Swap;
                            } else if bound < new - old {
                                action = AltAction::Discard;
                            }
                        }
                    }
                    None => {}
                }
                match action {
                    AltAction::Swap => {
                        ctx.stats.alternates_swapped += 1;
                        let alt = s.alternate.take().map(|b| *b);
                        if let Some(alt) = alt {
                            *self = alt;
                            self.learn(x, y, w, ctx);
                        }
                        return;
                    }
                    AltAction::Discard => {
                        ctx.stats.alternates_discarded += 1;
                        s.alternate = None;
                    }
                    AltAction::Keep => {}
                }
                if let Some(alt) = s.alternate.as_mut() {
                    alt.learn(x, y, w, ctx);
                }
                let b = s.branch(x);
                s.branch_weight[b] += w;
                s.children[b].learn(x, y, w, ctx);
            }
        }
    }

    fn depth(&self) -> u32 {
        match self {
            Node::Leaf(l) => l.depth,
            Node::Split(s) => s.children.iter().map(Node::depth).max().unwrap_or(s.depth),
        }
    }

    fn count(&self) -> (usize, usize) {
        match self {
            Node::Leaf(_) => (0, 1),
            Node::Split(s) => {
                let (a, b) = s.children[0].count();
                let (c, d) = s.children[1].count();
                (1 + a + c, b + d)
            }
        }
    }

    fn dump_into(&self, nodes: &mut Vec<DumpNode>) -> usize {
        let at = nodes.len();
        match self {
            Node::Leaf(l) => nodes.push(DumpNode::Leaf {
                class_counts: l.class_counts,
            }),
            Node::Split(s) => {
                nodes.push(DumpNode::Leaf {
                    class_counts: [0.0; 2],
                });
                let left = s.children[0].dump_into(nodes);
                let right = s.children[1].dump_into(nodes);
                nodes[at] = DumpNode::Split {
                    feature: s.feature.clone(),
                    threshold: s.threshold,
                    left,
                    right,
                    branch_weight: s.branch_weight,
                };
            }
        }
        at
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingAdaptiveTree {
    params: HatcParams,
    root: Node,
    sampler: Option<SubspaceSampler>,
    stats: TreeStats,
}

impl HoeffdingAdaptiveTree {
    pub fn new(params: HatcParams) -> Self {
        HoeffdingAdaptiveTree {
            params,
            root: Node::Leaf(Leaf::new(0, [0.0; 2], Subspace::All, params.drift_delta)),
            sampler: None,
            stats: TreeStats::default(),
        }
    }

    /// Each leaf restricts itself to a random feature subset of the given
    /// budget, drawn from the features of the first sample it learns. When
    /// the budget covers every available feature no randomness is consumed
    /// and the tree behaves exactly like [`HoeffdingAdaptiveTree::new`].
    pub fn with_subspaces(params: HatcParams, budget: FeatureBudget, rng: ChaCha8Rng) -> Self {
        HoeffdingAdaptiveTree {
            params,
            root: Node::Leaf(Leaf::new(
                0,
                [0.0; 2],
                Subspace::Pending,
                params.drift_delta,
            )),
            sampler: Some(SubspaceSampler { budget, rng }),
            stats: TreeStats::default(),
        }
    }

    pub fn params(&self) -> HatcParams {
        self.params
    }

    pub fn stats(&self) -> TreeStats {
        self.stats
    }

    pub fn depth(&self) -> u32 {
        self.root.depth()
    }

    pub fn n_leaves(&self) -> usize {
        self.root.count().1
    }

    pub fn n_splits(&self) -> usize {
        self.root.count().0
    }

    /// Estimated footprint in bytes, alternates included.
    pub fn memory_estimate(&self) -> usize {
        self.root.bytes()
    }

    pub fn learn_weighted(&mut self, x: &FeatureVector, y: Label, weight: f64) {
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
        if !(weight > 0.0) {
            return;
        }
        let mut ctx = Ctx {
            params: &self.params,
            sampler: self.sampler.as_mut(),
            bytes: self.root.bytes(),
            stats: &mut self.stats,
        };
        self.root.learn(x, y, weight, &mut ctx);
    }

    pub fn dump(&self) -> TreeDump {
        let mut nodes = Vec::new();
        self.root.dump_into(&mut nodes);
        TreeDump { nodes }
    }
}

impl Classifier for HoeffdingAdaptiveTree {
    fn learn_one(&mut self, x: &FeatureVector, y: Label) {
        self.learn_weighted(x, y, 1.0);
    }

    /// Normalized class counts of the leaf `x` reaches.
    fn predict_proba_one(&self, x: &FeatureVector) -> Proba {
        self.root.leaf_for(x).proba()
    }
}
