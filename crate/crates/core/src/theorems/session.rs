//! One corpus group with the derived contexts shared by every suite.

use std::sync::OnceLock;

use serde_json::{json, Value};

use crate::context::GroupContext;
use crate::error::Result;
use crate::group::{Caps, Group};
use crate::lattice::SubgroupLattice;
use crate::quotient::QuotientMap;
use crate::subgroup::Restriction;

pub struct Session {
    pub expr: String,
    pub ctx: GroupContext,
    quotient_maps: Vec<OnceLock<QuotientMap>>,
    quotient_ctxs: Vec<OnceLock<Result<GroupContext>>>,
    restricted: Vec<OnceLock<(GroupContext, Restriction)>>,
}

impl Session {
    pub fn new(expr: &str, group: Group, caps: &Caps) -> Result<Session> {
        Ok(Session::from_ctx(expr, GroupContext::new(group, caps)?))
    }

    pub fn with_lattice(expr: &str, group: Group, lattice: SubgroupLattice, caps: &Caps) -> Session {
        Session::from_ctx(expr, GroupContext::with_lattice(group, lattice, caps))
    }

    fn from_ctx(expr: &str, ctx: GroupContext) -> Session {
        let n = ctx.len();
        Session {
            expr: expr.to_string(),
            ctx,
            quotient_maps: (0..n).map(|_| OnceLock::new()).collect(),
            quotient_ctxs: (0..n).map(|_| OnceLock::new()).collect(),
            restricted: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn group(&self) -> &Group {
        self.ctx.group()
    }

    /// `G/N` for the normal subgroup with lattice index `n`.
    pub fn quotient_map(&self, n: usize) -> &QuotientMap {
        assert!(self.ctx.is_normal(n), "quotient by a non-normal subgroup");
        self.quotient_maps[n].get_or_init(|| QuotientMap::new_unchecked(self.group(), self.ctx.sub(n)))
    }

    /// Context of `G/N`, with its own lattice.
    pub fn quotient_ctx(&self, n: usize) -> Result<&GroupContext> {
        self.quotient_ctxs[n]
            .get_or_init(|| {
                let q = self.quotient_map(n);
                GroupContext::new(q.target().clone(), self.ctx.caps())
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Context of the subgroup `k` as a standalone group.
    pub fn restricted(&self, k: usize) -> &(GroupContext, Restriction) {
        self.restricted[k].get_or_init(|| self.ctx.restricted(k))
    }

    /// Reproducible name of a subgroup: lattice index, order and
    /// generator labels.
    pub fn describe(&self, i: usize) -> Value {
        describe(&self.ctx, i)
    }
}

pub fn describe(ctx: &GroupContext, i: usize) -> Value {
    let g = ctx.group();
    let gens: Vec<String> = ctx.lattice().gens(i).iter().map(|&a| g.label(a)).collect();
    json!({ "index": i, "order": ctx.sub(i).order(), "gens": gens })
}
