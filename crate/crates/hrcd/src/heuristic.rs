//! Two-stage heuristic: constructive greedy assignment followed by
//! best-improvement local search over shift, swap, drop, and open moves.
//!
//! Every move is evaluated with full re-staffing of the touched
//! facilities, so intermediate solutions stay feasible throughout. All
//! cost deltas are integer dollars, which keeps move selection free of
//! floating-point ties; sampling randomness comes from a ChaCha8 stream
//! seeded from `HeuristicParams::seed`.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::generate::geodesic_km;
use crate::instance::{Coords, Instance, Level, Money, PerResource};
use crate::model::{
    check_feasibility, minimal_staffing_from_loads, objective, OpenFacility, Solution,
};

/// Neighborhoods are enumerated exhaustively up to this |I| * |J| product
/// and sampled beyond it.
const EXHAUSTIVE_LIMIT: usize = 10_000;
/// Compound families get smaller budgets than the per-pair families; a
/// single drop or open evaluation already scans many reassignments.
const DROP_SAMPLE_CAP: usize = 24;
const OPEN_RANKED_CAP: usize = 16;
/// An open move considers at most this many nearby sites to attract.
const OPEN_PULL_CAP: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MovePolicy {
    /// Apply the single best improving move across all four families.
    BestOfAll,
    /// Pseudocode-faithful mode: shift beats swap beats drop beats open
    /// whenever the earlier family has any improving move.
    FamilyPriority,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MoveKind {
    Shift,
    Swap,
    Drop,
    Open,
}

impl MoveKind {
    pub const ALL: [MoveKind; 4] = [MoveKind::Shift, MoveKind::Swap, MoveKind::Drop, MoveKind::Open];

    fn rank(self) -> u8 {
        match self {
            MoveKind::Shift => 0,
            MoveKind::Swap => 1,
            MoveKind::Drop => 2,
            MoveKind::Open => 3,
        }
    }
}

impl std::fmt::Display for MoveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MoveKind::Shift => "shift",
            MoveKind::Swap => "swap",
            MoveKind::Drop => "drop",
            MoveKind::Open => "open",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicParams {
    /// Consecutive non-improving iterations before the search stops.
    pub stall_limit: u32,
    /// Candidate moves sampled per pairwise family per iteration on large
    /// instances.
    pub neighborhood_sample: usize,
    pub seed: u64,
    pub time_limit_s: Option<f64>,
    pub move_policy: MovePolicy,
}

impl Default for HeuristicParams {
    fn default() -> Self {
        HeuristicParams {
            stall_limit: 100,
            neighborhood_sample: 200,
            seed: 0,
            time_limit_s: None,
            move_policy: MovePolicy::BestOfAll,
        }
    }
}

/// Observability record for one heuristic run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchTrace {
    pub iterations: u64,
    /// Applied-move counters indexed by [`MoveKind::ALL`].
    pub moves_applied: [u64; 4],
    /// `(iteration, total cost)` after construction and each applied move.
    pub cost_trajectory: Vec<(u64, Money)>,
    pub construction_cost: Money,
    pub final_cost: Money,
}

impl SearchTrace {
    pub fn applied(&self, kind: MoveKind) -> u64 {
        self.moves_applied[kind.rank() as usize]
    }

    pub fn total_applied(&self) -> u64 {
        self.moves_applied.iter().sum()
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum HeuristicError {
    #[error("site {site} cannot be served by any candidate within SLA and capacity")]
    Infeasible { site: usize },
}

/// Internal abort reasons for the deadline-aware greedy used to warm-start
/// the exact solver.
pub(crate) enum GreedyAbort {
    Infeasible(usize),
    Deadline,
}

// ---------------------------------------------------------------------------
// Working state
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
struct FacWork {
    config: Option<(Level, PerResource<u32>)>,
    /// Assigned sites in ascending id order (canonical for staffing sums).
    sites: Vec<usize>,
    robot_load: f64,
    human_load: f64,
    /// Per level index: how many assigned sites that level cannot reach in
    /// time. A level is SLA-feasible iff its counter is zero.
    viol: [u32; 3],
    cost: Money,
}

impl FacWork {
    fn closed() -> Self {
        FacWork {
            config: None,
            sites: Vec::new(),
            robot_load: 0.0,
            human_load: 0.0,
            viol: [0; 3],
            cost: 0,
        }
    }

    fn agg(&self) -> FacAgg {
        FacAgg {
            robot: self.robot_load,
            human: self.human_load,
            viol: self.viol,
        }
    }
}

/// Lightweight aggregate view used during move evaluation.
#[derive(Debug, Clone, Copy)]
struct FacAgg {
    robot: f64,
    human: f64,
    viol: [u32; 3],
}

impl FacAgg {
    fn empty() -> Self {
        FacAgg {
            robot: 0.0,
            human: 0.0,
            viol: [0; 3],
        }
    }
}

const UNASSIGNED: usize = usize::MAX;

struct Working<'a> {
    instance: &'a Instance,
    facs: Vec<FacWork>,
    assignment: Vec<usize>,
    total: Money,
}

impl<'a> Working<'a> {
    fn empty(instance: &'a Instance) -> Self {
        Working {
            instance,
            facs: vec![FacWork::closed(); instance.n_candidates()],
            assignment: vec![UNASSIGNED; instance.n_sites()],
            total: 0,
        }
    }

    /// Loads a given solution verbatim: levels and staffing are taken as
    /// provided, only derived aggregates are computed.
    fn from_solution(instance: &'a Instance, solution: &Solution) -> Self {
        let mut w = Working::empty(instance);
        w.assignment = solution.assignment.clone();
        for (j, &i) in solution.assignment.iter().enumerate() {
            w.facs[i].sites.push(j);
        }
        for (i, fac) in solution.facilities.iter().enumerate() {
            let work = &mut w.facs[i];
            if let Some(fac) = fac {
                work.config = Some((fac.level, fac.staff));
                let unit = instance.candidates[i].unit_cost;
                work.cost = instance.fixed_cost(i, fac.level)
                    + unit.robot * fac.staff.robot as Money
                    + unit.human * fac.staff.human as Money;
            }
            for idx in 0..work.sites.len() {
                let j = work.sites[idx];
                work.robot_load += instance.sites[j].robot_demand();
                work.human_load += instance.sites[j].human_demand();
                for level in Level::ALL {
                    if !instance.within_sla(i, j, level) {
                        work.viol[level.index()] += 1;
                    }
                }
            }
            w.total += work.cost;
        }
        w
    }

    fn to_solution(&self) -> Solution {
        Solution {
            facilities: self
                .facs
                .iter()
                .map(|f| f.config.map(|(level, staff)| OpenFacility { level, staff }))
                .collect(),
            assignment: self.assignment.clone(),
        }
    }

    fn open_ids(&self) -> Vec<usize> {
        (0..self.facs.len())
            .filter(|&i| self.facs[i].config.is_some())
            .collect()
    }

    fn closed_ids(&self) -> Vec<usize> {
        (0..self.facs.len())
            .filter(|&i| self.facs[i].config.is_none())
            .collect()
    }

    /// Cheapest feasible (level, staffing, full cost) for candidate `i`
    /// carrying `agg`. `None` when no level passes SLA and capacity.
    fn best_config(&self, i: usize, agg: &FacAgg) -> Option<(Level, PerResource<u32>, Money)> {
        let unit = self.instance.candidates[i].unit_cost;
        let mut best: Option<(Level, PerResource<u32>, Money)> = None;
        for level in [Level::Low, Level::Medium, Level::High] {
            if agg.viol[level.index()] != 0 {
                continue;
            }
            let Ok(staff) =
                minimal_staffing_from_loads(self.instance, agg.robot, agg.human, level)
            else {
                continue;
            };
            let cost = self.instance.fixed_cost(i, level)
                + unit.robot * staff.robot as Money
                + unit.human * staff.human as Money;
            if best.map_or(true, |(_, _, c)| cost < c) {
                best = Some((level, staff, cost));
            }
        }
        best
    }

    fn agg_with(&self, i: usize, agg: &FacAgg, add: Option<usize>, remove: Option<usize>) -> FacAgg {
        let mut out = *agg;
        if let Some(j) = add {
            out.robot += self.instance.sites[j].robot_demand();
            out.human += self.instance.sites[j].human_demand();
            for level in Level::ALL {
                if !self.instance.within_sla(i, j, level) {
                    out.viol[level.index()] += 1;
                }
            }
        }
        if let Some(j) = remove {
            out.robot -= self.instance.sites[j].robot_demand();
            out.human -= self.instance.sites[j].human_demand();
            for level in Level::ALL {
                if !self.instance.within_sla(i, j, level) {
                    out.viol[level.index()] -= 1;
                }
            }
        }
        out
    }

    /// Rebuilds facility `i` from its site list: fresh canonical loads and
    /// the cheapest feasible configuration. Returns false when the set has
    /// become unservable (callers then roll the plan back).
    fn recompute(&mut self, i: usize) -> bool {
        let sites = std::mem::take(&mut self.facs[i].sites);
        let was_open = self.facs[i].config.is_some();
        let mut agg = FacAgg::empty();
        for &j in &sites {
            agg.robot += self.instance.sites[j].robot_demand();
            agg.human += self.instance.sites[j].human_demand();
            for level in Level::ALL {
                if !self.instance.within_sla(i, j, level) {
                    agg.viol[level.index()] += 1;
                }
            }
        }
        self.total -= self.facs[i].cost;
        if sites.is_empty() && !was_open {
            self.facs[i] = FacWork::closed();
            return true;
        }
        let Some((level, staff, cost)) = self.best_config(i, &agg) else {
            self.facs[i].sites = sites;
            self.total += self.facs[i].cost;
            return false;
        };
        self.facs[i] = FacWork {
            config: Some((level, staff)),
            sites,
            robot_load: agg.robot,
            human_load: agg.human,
            viol: agg.viol,
            cost,
        };
        self.total += cost;
        true
    }

    fn insert_site(&mut self, i: usize, j: usize) {
        let pos = self.facs[i].sites.binary_search(&j).unwrap_err();
        self.facs[i].sites.insert(pos, j);
        self.assignment[j] = i;
    }

    fn remove_site(&mut self, i: usize, j: usize) {
        let pos = self.facs[i].sites.binary_search(&j).unwrap();
        self.facs[i].sites.remove(pos);
    }
}

// ---------------------------------------------------------------------------
// Moves
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum MovePlan {
    Shift { site: usize, to: usize },
    Swap { a: usize, b: usize },
    Drop { facility: usize, relocations: Vec<(usize, usize)> },
    Open { facility: usize, pulled: Vec<usize> },
}

impl MovePlan {
    fn kind(&self) -> MoveKind {
        match self {
            MovePlan::Shift { .. } => MoveKind::Shift,
            MovePlan::Swap { .. } => MoveKind::Swap,
            MovePlan::Drop { .. } => MoveKind::Drop,
            MovePlan::Open { .. } => MoveKind::Open,
        }
    }

    fn tie_key(&self) -> (usize, usize) {
        match self {
            MovePlan::Shift { site, to } => (*site, *to),
            MovePlan::Swap { a, b } => (*a, *b),
            MovePlan::Drop { facility, .. } => (*facility, 0),
            MovePlan::Open { facility, .. } => (*facility, 0),
        }
    }
}

/// Keeps the lexicographically best (delta, family, tie-key) candidate.
struct BestMove {
    best: Option<(Money, u8, (usize, usize), MovePlan)>,
}

impl BestMove {
    fn new() -> Self {
        BestMove { best: None }
    }

    fn offer(&mut self, delta: Money, plan: MovePlan) {
        if delta >= 0 {
            return;
        }
        let key = (delta, plan.kind().rank(), plan.tie_key());
        if self
            .best
            .as_ref()
            .map_or(true, |(d, r, k, _)| key < (*d, *r, *k))
        {
            self.best = Some((delta, plan.kind().rank(), plan.tie_key(), plan));
        }
    }

    fn take(self) -> Option<(Money, MovePlan)> {
        self.best.map(|(d, _, _, plan)| (d, plan))
    }
}

fn eval_shift(w: &Working, j: usize, to: usize) -> Option<(Money, MovePlan)> {
    let from = w.assignment[j];
    if from == to || w.facs[to].config.is_none() {
        return None;
    }
    let donor_agg = w.agg_with(from, &w.facs[from].agg(), None, Some(j));
    let recv_agg = w.agg_with(to, &w.facs[to].agg(), Some(j), None);
    let (_, _, donor_cost) = w.best_config(from, &donor_agg)?;
    let (_, _, recv_cost) = w.best_config(to, &recv_agg)?;
    let delta = donor_cost + recv_cost - w.facs[from].cost - w.facs[to].cost;
    Some((delta, MovePlan::Shift { site: j, to }))
}

fn eval_swap(w: &Working, a: usize, b: usize) -> Option<(Money, MovePlan)> {
    let (ia, ib) = (w.assignment[a], w.assignment[b]);
    if ia == ib {
        return None;
    }
    let agg_a = w.agg_with(ia, &w.agg_with(ia, &w.facs[ia].agg(), None, Some(a)), Some(b), None);
    let agg_b = w.agg_with(ib, &w.agg_with(ib, &w.facs[ib].agg(), None, Some(b)), Some(a), None);
    let (_, _, cost_a) = w.best_config(ia, &agg_a)?;
    let (_, _, cost_b) = w.best_config(ib, &agg_b)?;
    let delta = cost_a + cost_b - w.facs[ia].cost - w.facs[ib].cost;
    Some((delta, MovePlan::Swap { a, b }))
}

/// Overlay of tentatively modified facilities during compound evaluation.
struct Overlay {
    touched: Vec<(usize, FacAgg, Money)>,
}

impl Overlay {
    fn new() -> Self {
        Overlay { touched: Vec::new() }
    }

    fn get(&self, w: &Working, i: usize) -> (FacAgg, Money) {
        for &(k, agg, cost) in self.touched.iter().rev() {
            if k == i {
                return (agg, cost);
            }
        }
        (w.facs[i].agg(), w.facs[i].cost)
    }

    fn put(&mut self, i: usize, agg: FacAgg, cost: Money) {
        self.touched.push((i, agg, cost));
    }
}

fn eval_drop(w: &Working, facility: usize) -> Option<(Money, MovePlan)> {
    w.facs[facility].config?;
    let mut order: Vec<usize> = w.facs[facility].sites.clone();
    order.sort_by(|&a, &b| {
        w.instance.sites[b]
            .demand_scu
            .partial_cmp(&w.instance.sites[a].demand_scu)
            .unwrap()
            .then(a.cmp(&b))
    });
    let targets: Vec<usize> = w.open_ids().into_iter().filter(|&i| i != facility).collect();
    let mut overlay = Overlay::new();
    let mut relocations = Vec::with_capacity(order.len());
    let mut delta = -w.facs[facility].cost;
    for &j in &order {
        let mut best: Option<(Money, usize, FacAgg, Money)> = None;
        for &t in &targets {
            let (agg, cost_before) = overlay.get(w, t);
            let agg_after = w.agg_with(t, &agg, Some(j), None);
            if let Some((_, _, cost_after)) = w.best_config(t, &agg_after) {
                let d = cost_after - cost_before;
                if best.as_ref().map_or(true, |(bd, bt, _, _)| (d, t) < (*bd, *bt)) {
                    best = Some((d, t, agg_after, cost_after));
                }
            }
        }
        let (d, t, agg_after, cost_after) = best?;
        overlay.put(t, agg_after, cost_after);
        delta += d;
        relocations.push((j, t));
    }
    Some((delta, MovePlan::Drop { facility, relocations }))
}

fn eval_open(w: &Working, facility: usize) -> Option<(Money, MovePlan)> {
    if w.facs[facility].config.is_some() {
        return None;
    }
    // Sites this candidate can reach at any level, nearest first.
    let cand_coords = w.instance.candidates[facility].coords;
    let mut eligible: Vec<(f64, usize)> = (0..w.instance.n_sites())
        .filter(|&j| {
            Level::ALL
                .iter()
                .any(|&l| w.instance.within_sla(facility, j, l))
        })
        .map(|j| (geodesic_km(cand_coords, w.instance.sites[j].coords), j))
        .collect();
    eligible.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    eligible.truncate(OPEN_PULL_CAP);

    let mut overlay = Overlay::new();
    let mut new_agg = FacAgg::empty();
    let (_, _, mut new_cost) = w.best_config(facility, &new_agg)?;
    let mut donor_delta_sum: Money = 0;
    let mut pulled = Vec::new();
    for &(_, j) in &eligible {
        let donor = w.assignment[j];
        let (donor_agg, donor_before) = overlay.get(w, donor);
        let donor_after_agg = w.agg_with(donor, &donor_agg, None, Some(j));
        let Some((_, _, donor_after)) = w.best_config(donor, &donor_after_agg) else {
            continue;
        };
        let new_after_agg = w.agg_with(facility, &new_agg, Some(j), None);
        let Some((_, _, new_after)) = w.best_config(facility, &new_after_agg) else {
            continue;
        };
        let marginal = (donor_after - donor_before) + (new_after - new_cost);
        if marginal < 0 {
            overlay.put(donor, donor_after_agg, donor_after);
            donor_delta_sum += donor_after - donor_before;
            new_agg = new_after_agg;
            new_cost = new_after;
            pulled.push(j);
        }
    }
    if pulled.is_empty() {
        return None;
    }
    let delta = donor_delta_sum + new_cost;
    Some((delta, MovePlan::Open { facility, pulled }))
}

/// Applies a plan with canonical re-staffing of every touched facility.
/// Returns the realized delta, or rolls back and returns `None` when the
/// canonical recomputation disagrees with the aggregate evaluation and the
/// move is not strictly improving.
fn apply_plan(w: &mut Working, plan: &MovePlan) -> Option<Money> {
    let mut touched: Vec<usize> = Vec::new();
    let before_total = w.total;
    let snapshot: Vec<(usize, FacWork)>;
    let assignment_snapshot: Vec<(usize, usize)>;

    match plan {
        MovePlan::Shift { site, to } => {
            let from = w.assignment[*site];
            snapshot = vec![(from, w.facs[from].clone()), (*to, w.facs[*to].clone())];
            assignment_snapshot = vec![(*site, from)];
            w.remove_site(from, *site);
            w.insert_site(*to, *site);
            touched.extend([from, *to]);
        }
        MovePlan::Swap { a, b } => {
            let (ia, ib) = (w.assignment[*a], w.assignment[*b]);
            snapshot = vec![(ia, w.facs[ia].clone()), (ib, w.facs[ib].clone())];
            assignment_snapshot = vec![(*a, ia), (*b, ib)];
            w.remove_site(ia, *a);
            w.remove_site(ib, *b);
            w.insert_site(ib, *a);
            w.insert_site(ia, *b);
            touched.extend([ia, ib]);
        }
        MovePlan::Drop { facility, relocations } => {
            let mut snap = vec![(*facility, w.facs[*facility].clone())];
            let mut asg_snap = Vec::new();
            for &(j, t) in relocations {
                if !snap.iter().any(|(i, _)| *i == t) {
                    snap.push((t, w.facs[t].clone()));
                }
                asg_snap.push((j, w.assignment[j]));
                w.remove_site(*facility, j);
                w.insert_site(t, j);
                if !touched.contains(&t) {
                    touched.push(t);
                }
            }
            snapshot = snap;
            assignment_snapshot = asg_snap;
            debug_assert!(w.facs[*facility].sites.is_empty());
            w.total -= w.facs[*facility].cost;
            w.facs[*facility] = FacWork::closed();
        }
        MovePlan::Open { facility, pulled } => {
            let mut snap = vec![(*facility, w.facs[*facility].clone())];
            let mut asg_snap = Vec::new();
            for &j in pulled {
                let donor = w.assignment[j];
                if !snap.iter().any(|(i, _)| *i == donor) {
                    snap.push((donor, w.facs[donor].clone()));
                }
                asg_snap.push((j, donor));
                w.remove_site(donor, j);
                w.insert_site(*facility, j);
                if !touched.contains(&donor) {
                    touched.push(donor);
                }
            }
            snapshot = snap;
            assignment_snapshot = asg_snap;
            // Mark as open so recompute keeps it even if the pull list
            // somehow came back empty.
            w.facs[*facility].config = Some((Level::Low, PerResource::new(0, 0)));
            touched.push(*facility);
        }
    }

    let mut ok = true;
    for &i in &touched {
        if !w.recompute(i) {
            ok = false;
            break;
        }
    }
    let delta = w.total - before_total;
    if !ok || delta >= 0 {
        for (j, i) in assignment_snapshot {
            w.assignment[j] = i;
        }
        for (i, fac) in snapshot {
            w.total -= w.facs[i].cost;
            w.total += fac.cost;
            w.facs[i] = fac;
        }
        debug_assert_eq!(w.total, before_total);
        return None;
    }
    debug_assert!(
        check_feasibility(w.instance, &w.to_solution())
            .map(|r| r.is_feasible())
            .unwrap_or(false),
        "move application broke feasibility"
    );
    Some(delta)
}

// ---------------------------------------------------------------------------
// Stage 1: constructive greedy
// ---------------------------------------------------------------------------

pub(crate) fn construct_greedy_with_deadline(
    instance: &Instance,
    deadline: Option<Instant>,
) -> Result<Solution, GreedyAbort> {
    let mut w = Working::empty(instance);
    // Hardest-to-place first: by tier criticality, then demand.
    let mut order: Vec<usize> = (0..instance.n_sites()).collect();
    order.sort_by(|&a, &b| {
        let (sa, sb) = (&instance.sites[a], &instance.sites[b]);
        sa.tier
            .rank()
            .cmp(&sb.tier.rank())
            .then(sb.demand_scu.partial_cmp(&sa.demand_scu).unwrap())
            .then(a.cmp(&b))
    });
    for (step, &j) in order.iter().enumerate() {
        if step % 32 == 0 {
            if let Some(d) = deadline {
                if Instant::now() >= d {
                    return Err(GreedyAbort::Deadline);
                }
            }
        }
        let mut best: Option<(Money, usize)> = None;
        for i in 0..instance.n_candidates() {
            let agg = w.agg_with(i, &w.facs[i].agg(), Some(j), None);
            if let Some((_, _, cost)) = w.best_config(i, &agg) {
                let delta = cost - w.facs[i].cost;
                if best.map_or(true, |(bd, bi)| (delta, i) < (bd, bi)) {
                    best = Some((delta, i));
                }
            }
        }
        let Some((_, i)) = best else {
            return Err(GreedyAbort::Infeasible(j));
        };
        w.insert_site(i, j);
        let ok = w.recompute(i);
        debug_assert!(ok, "greedy applied an infeasible assignment");
    }
    Ok(w.to_solution())
}

/// Stage 1: assigns every site to its marginal-cost-minimizing facility,
/// opening facilities and adjusting levels as needed. Deterministic; the
/// seed is reserved for trace bookkeeping symmetry with stage 2.
pub fn construct_greedy(
    instance: &Instance,
    _seed: u64,
) -> Result<(Solution, SearchTrace), HeuristicError> {
    match construct_greedy_with_deadline(instance, None) {
        Ok(solution) => {
            let cost = objective(instance, &solution).expect("structural validity").total;
            let trace = SearchTrace {
                iterations: 0,
                moves_applied: [0; 4],
                cost_trajectory: vec![(0, cost)],
                construction_cost: cost,
                final_cost: cost,
            };
            Ok((solution, trace))
        }
        Err(GreedyAbort::Infeasible(site)) => Err(HeuristicError::Infeasible { site }),
        Err(GreedyAbort::Deadline) => unreachable!("no deadline was set"),
    }
}

// ---------------------------------------------------------------------------
// Stage 2: best-improvement local search
// ---------------------------------------------------------------------------

fn best_move(
    w: &Working,
    params: &HeuristicParams,
    rng: &mut ChaCha8Rng,
    exhaustive: bool,
) -> Option<(Money, MovePlan)> {
    let open = w.open_ids();
    let closed = w.closed_ids();
    let n_j = w.instance.n_sites();

    let mut families: [BestMove; 4] = [BestMove::new(), BestMove::new(), BestMove::new(), BestMove::new()];

    if exhaustive {
        for j in 0..n_j {
            for &to in &open {
                if let Some((d, plan)) = eval_shift(w, j, to) {
                    families[0].offer(d, plan);
                }
            }
        }
        for a in 0..n_j {
            for b in (a + 1)..n_j {
                if let Some((d, plan)) = eval_swap(w, a, b) {
                    families[1].offer(d, plan);
                }
            }
        }
        for &i in &open {
            if let Some((d, plan)) = eval_drop(w, i) {
                families[2].offer(d, plan);
            }
        }
        for &i in &closed {
            if let Some((d, plan)) = eval_open(w, i) {
                families[3].offer(d, plan);
            }
        }
    } else {
        let sample = params.neighborhood_sample;
        if !open.is_empty() && n_j > 0 {
            for _ in 0..sample {
                let j = rng.gen_range(0..n_j);
                let to = open[rng.gen_range(0..open.len())];
                if let Some((d, plan)) = eval_shift(w, j, to) {
                    families[0].offer(d, plan);
                }
            }
            for _ in 0..sample {
                let a = rng.gen_range(0..n_j);
                let b = rng.gen_range(0..n_j);
                if a != b {
                    let (a, b) = (a.min(b), a.max(b));
                    if let Some((d, plan)) = eval_swap(w, a, b) {
                        families[1].offer(d, plan);
                    }
                }
            }
        }
        if open.len() <= DROP_SAMPLE_CAP {
            for &i in &open {
                if let Some((d, plan)) = eval_drop(w, i) {
                    families[2].offer(d, plan);
                }
            }
        } else {
            for _ in 0..DROP_SAMPLE_CAP {
                let i = open[rng.gen_range(0..open.len())];
                if let Some((d, plan)) = eval_drop(w, i) {
                    families[2].offer(d, plan);
                }
            }
        }
        // Open candidates ranked by distance to the centroid of the worst
        // served tenth of sites (highest marginal variable cost).
        if !closed.is_empty() {
            let mut worst: Vec<(Money, usize)> = (0..n_j)
                .map(|j| {
                    let i = w.assignment[j];
                    let unit = w.instance.candidates[i].unit_cost;
                    let cost = (unit.robot as f64 * w.instance.sites[j].robot_demand()
                        + unit.human as f64 * w.instance.sites[j].human_demand())
                        as Money;
                    (cost, j)
                })
                .collect();
            worst.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let take = (n_j / 10).max(1).min(worst.len());
            let centroid = {
                let (mut lat, mut lon) = (0.0, 0.0);
                for &(_, j) in worst.iter().take(take) {
                    lat += w.instance.sites[j].coords.lat;
                    lon += w.instance.sites[j].coords.lon;
                }
                Coords::new(lat / take as f64, lon / take as f64)
            };
            let mut ranked: Vec<(f64, usize)> = closed
                .iter()
                .map(|&i| (geodesic_km(w.instance.candidates[i].coords, centroid), i))
                .collect();
            ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            for &(_, i) in ranked.iter().take(OPEN_RANKED_CAP) {
                if let Some((d, plan)) = eval_open(w, i) {
                    families[3].offer(d, plan);
                }
            }
        }
    }

    match params.move_policy {
        MovePolicy::BestOfAll => {
            let mut combined = BestMove::new();
            for family in families {
                if let Some((d, plan)) = family.take() {
                    combined.offer(d, plan);
                }
            }
            combined.take()
        }
        MovePolicy::FamilyPriority => families.into_iter().find_map(|f| f.take()),
    }
}

/// Stage 2: repeatedly applies the best strictly improving move until
/// `stall_limit` consecutive iterations bring none, or the time budget
/// runs out. The returned cost never exceeds the start cost.
pub fn local_search(
    instance: &Instance,
    start: &Solution,
    params: &HeuristicParams,
) -> (Solution, SearchTrace) {
    debug_assert!(
        check_feasibility(instance, start)
            .map(|r| r.is_feasible())
            .unwrap_or(false),
        "local search requires a feasible start"
    );
    let begin = Instant::now();
    let deadline = params
        .time_limit_s
        .map(|s| begin + std::time::Duration::from_secs_f64(s));
    let mut w = Working::from_solution(instance, start);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let exhaustive = instance.n_candidates() * instance.n_sites() <= EXHAUSTIVE_LIMIT;

    let start_cost = w.total;
    let mut trace = SearchTrace {
        iterations: 0,
        moves_applied: [0; 4],
        cost_trajectory: vec![(0, start_cost)],
        construction_cost: start_cost,
        final_cost: start_cost,
    };
    let mut stall: u32 = 0;
    while stall < params.stall_limit {
        if let Some(d) = deadline {
            if Instant::now() >= d {
                break;
            }
        }
        trace.iterations += 1;
        let applied = best_move(&w, params, &mut rng, exhaustive)
            .and_then(|(_, plan)| apply_plan(&mut w, &plan).map(|delta| (delta, plan)));
        match applied {
            Some((_, plan)) => {
                trace.moves_applied[plan.kind().rank() as usize] += 1;
                trace.cost_trajectory.push((trace.iterations, w.total));
                stall = 0;
            }
            None => stall += 1,
        }
    }
    trace.final_cost = w.total;
    (w.to_solution(), trace)
}

/// The full two-stage heuristic: greedy construction then local search.
pub fn solve_heuristic(
    instance: &Instance,
    params: &HeuristicParams,
) -> Result<(Solution, SearchTrace), HeuristicError> {
    let begin = Instant::now();
    let (built, construct_trace) = construct_greedy(instance, params.seed)?;
    let mut search_params = params.clone();
    if let Some(limit) = params.time_limit_s {
        let used = begin.elapsed().as_secs_f64();
        search_params.time_limit_s = Some((limit - used).max(0.0));
    }
    let (solution, mut trace) = local_search(instance, &built, &search_params);
    trace.construction_cost = construct_trace.construction_cost;
    Ok((solution, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{brute_force_optimum, solve_exact, SolverLimits};
    use crate::generate::{default_level_specs, generate_instance, GeneratorParams};
    use crate::instance::{
        CandidateLocation, Coords, DemandSite, Instance, InstanceMeta, ScenarioConfig, Tier,
    };

    fn one_candidate_instance(slas: &[f64], times: &[[f64; 3]]) -> Instance {
        let sites: Vec<DemandSite> = slas
            .iter()
            .enumerate()
            .map(|(id, &sla)| DemandSite {
                id,
                coords: Coords::new(26.3, 50.15),
                tier: Tier::Tier3,
                demand_scu: 5.0,
                mix_ratio: 0.5,
                sla_minutes: sla,
            })
            .collect();
        let mut response_time = Vec::new();
        for row in times {
            response_time.extend_from_slice(row);
        }
        Instance {
            meta: InstanceMeta::default(),
            scenario: ScenarioConfig::conservative(),
            levels: default_level_specs(),
            candidates: vec![CandidateLocation {
                id: 0,
                coords: Coords::new(26.3, 50.15),
                base_fixed_cost: 80_000,
                unit_cost: PerResource::new(1200, 3000),
            }],
            sites,
            response_time,
            big_m: 1000.0,
            fixed_cost_override: None,
        }
    }

    #[test]
    fn greedy_serves_everything_from_the_only_candidate() {
        // Both sites reachable even at low level.
        let instance = one_candidate_instance(
            &[30.0, 30.0],
            &[[2.0, 3.0, 5.0], [2.0, 3.0, 5.0]],
        );
        let (solution, _) = construct_greedy(&instance, 0).unwrap();
        assert_eq!(solution.assignment, vec![0, 0]);
        assert_eq!(solution.facilities[0].map(|f| f.level), Some(Level::Low));
        assert!(check_feasibility(&instance, &solution).unwrap().is_feasible());
    }

    #[test]
    fn tight_sla_forces_a_level_upgrade() {
        // Site 1 is reachable in time only at high level, despite low being
        // cheaper for site 0.
        let instance = one_candidate_instance(
            &[30.0, 4.0],
            &[[2.0, 3.0, 5.0], [3.5, 5.25, 8.75]],
        );
        let (solution, _) = construct_greedy(&instance, 0).unwrap();
        assert_eq!(solution.facilities[0].map(|f| f.level), Some(Level::High));
        assert!(check_feasibility(&instance, &solution).unwrap().is_feasible());
    }

    #[test]
    fn greedy_reports_unservable_sites() {
        let instance = one_candidate_instance(&[1.0], &[[2.0, 3.0, 5.0]]);
        let err = construct_greedy(&instance, 0).unwrap_err();
        assert_eq!(err, HeuristicError::Infeasible { site: 0 });
    }

    #[test]
    fn local_search_leaves_an_optimal_start_unchanged() {
        let params = GeneratorParams::new(11, 3, 5, ScenarioConfig::conservative());
        let instance = generate_instance(&params);
        let optimal = brute_force_optimum(&instance)
            .unwrap()
            .solution
            .expect("feasible");
        let (solution, trace) = local_search(&instance, &optimal, &HeuristicParams::default());
        assert_eq!(solution, optimal);
        assert_eq!(trace.total_applied(), 0);
        assert_eq!(trace.final_cost, trace.construction_cost);
    }

    #[test]
    fn drop_move_closes_a_redundant_facility() {
        let params = GeneratorParams::new(4, 10, 30, ScenarioConfig::balanced());
        let instance = generate_instance(&params);
        let (mut start, _) = construct_greedy(&instance, 0).unwrap();
        let unused = start
            .facilities
            .iter()
            .position(|f| f.is_none())
            .expect("greedy leaves some candidate closed");
        let staff = crate::model::minimal_staffing(&instance, &[], Level::Low).unwrap();
        start.facilities[unused] = Some(OpenFacility {
            level: Level::Low,
            staff,
        });
        let before = objective(&instance, &start).unwrap().total;
        assert!(check_feasibility(&instance, &start).unwrap().is_feasible());

        let (solution, trace) = local_search(&instance, &start, &HeuristicParams::default());
        let after = objective(&instance, &solution).unwrap().total;
        assert!(solution.facilities[unused].is_none(), "facility not dropped");
        assert!(after < before);
        assert!(trace.applied(MoveKind::Drop) >= 1);
    }

    #[test]
    fn heuristic_never_beats_the_oracle() {
        for seed in 0..12u64 {
            let params = GeneratorParams::new(
                seed,
                2 + (seed % 3) as usize,
                4 + (seed % 5) as usize,
                ScenarioConfig::preset(crate::instance::ScenarioName::ALL[(seed % 3) as usize]),
            );
            let instance = generate_instance(&params);
            let oracle = brute_force_optimum(&instance).unwrap();
            let (solution, trace) =
                solve_heuristic(&instance, &HeuristicParams::default()).unwrap();
            let cost = objective(&instance, &solution).unwrap().total;
            assert_eq!(cost, trace.final_cost);
            assert!(check_feasibility(&instance, &solution).unwrap().is_feasible());
            let optimum = oracle.incumbent_cost.expect("feasible");
            assert!(cost >= optimum, "seed {seed}: heuristic {cost} < oracle {optimum}");
        }
    }

    #[test]
    fn trajectory_is_strictly_decreasing_and_matches_deltas() {
        let params = GeneratorParams::new(42, 12, 60, ScenarioConfig::conservative());
        let instance = generate_instance(&params);
        let (_, trace) = solve_heuristic(&instance, &HeuristicParams::default()).unwrap();
        for pair in trace.cost_trajectory.windows(2) {
            assert!(pair[1].1 < pair[0].1, "non-improving step in {pair:?}");
        }
        assert_eq!(
            trace.cost_trajectory.last().unwrap().1,
            trace.final_cost
        );
    }

    #[test]
    fn runs_are_deterministic_for_a_fixed_seed() {
        let params = GeneratorParams::new(17, 12, 60, ScenarioConfig::future());
        let instance = generate_instance(&params);
        let hp = HeuristicParams {
            seed: 99,
            ..HeuristicParams::default()
        };
        let (a, trace_a) = solve_heuristic(&instance, &hp).unwrap();
        let (b, trace_b) = solve_heuristic(&instance, &hp).unwrap();
        assert_eq!(a, b);
        assert_eq!(trace_a, trace_b);
    }

    #[test]
    fn stall_limit_grants_the_full_grace_period() {
        let params = GeneratorParams::new(3, 6, 20, ScenarioConfig::conservative());
        let instance = generate_instance(&params);
        let hp = HeuristicParams {
            stall_limit: 7,
            ..HeuristicParams::default()
        };
        let (_, trace) = solve_heuristic(&instance, &hp).unwrap();
        let last_improvement = trace.cost_trajectory.last().unwrap().0;
        assert!(
            trace.iterations >= last_improvement + 7,
            "iterations {} vs last improvement {last_improvement}",
            trace.iterations
        );
    }

    #[test]
    fn family_priority_mode_also_reaches_feasible_solutions() {
        let params = GeneratorParams::new(21, 12, 60, ScenarioConfig::balanced());
        let instance = generate_instance(&params);
        let hp = HeuristicParams {
            move_policy: MovePolicy::FamilyPriority,
            ..HeuristicParams::default()
        };
        let (solution, trace) = solve_heuristic(&instance, &hp).unwrap();
        assert!(check_feasibility(&instance, &solution).unwrap().is_feasible());
        assert!(trace.final_cost <= trace.construction_cost);
    }

    #[test]
    fn time_limit_stops_the_search() {
        let params = GeneratorParams::new(8, 30, 400, ScenarioConfig::conservative());
        let instance = generate_instance(&params);
        let hp = HeuristicParams {
            time_limit_s: Some(0.05),
            ..HeuristicParams::default()
        };
        let begin = Instant::now();
        let (solution, _) = solve_heuristic(&instance, &hp).unwrap();
        assert!(begin.elapsed().as_secs_f64() < 30.0);
        assert!(check_feasibility(&instance, &solution).unwrap().is_feasible());
    }
}
