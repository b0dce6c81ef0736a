//! Reference exact solver: depth-first branch and bound over facility
//! configurations followed by site assignments, with an admissible
//! combinatorial lower bound, plus a pure enumeration oracle for
//! cross-checking at toy scale.
//!
//! Branching order follows the cost structure: facility-level decisions
//! carry the fixed costs and prune fastest, so candidates are decided
//! first (closed or a level), then sites are assigned in descending
//! demand order to the open facilities.

use std::time::Instant;

use crate::heuristic;
use crate::instance::{Instance, Level, Money, PerResource, EPS};
use crate::model::{ceil_tol, minimal_staffing, objective, OpenFacility, Solution};

/// Search budget.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverLimits {
    pub time_limit_s: f64,
    /// Relative optimality gap at which the search may stop.
    pub gap_limit: f64,
    pub node_limit: Option<u64>,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            time_limit_s: 3600.0,
            gap_limit: 0.01,
            node_limit: None,
        }
    }
}

impl SolverLimits {
    /// No gap slack: run to proven optimality within the time budget.
    pub fn exact(time_limit_s: f64) -> Self {
        SolverLimits {
            time_limit_s,
            gap_limit: 0.0,
            node_limit: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    FeasibleAtLimit,
    InfeasibleProven,
    LimitNoSolution,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::FeasibleAtLimit => "feasible-at-limit",
            SolveStatus::InfeasibleProven => "infeasible-proven",
            SolveStatus::LimitNoSolution => "limit-no-solution",
        };
        write!(f, "{s}")
    }
}

/// One incumbent-trajectory point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogEntry {
    pub nodes: u64,
    pub incumbent: Option<Money>,
}

#[derive(Debug, Clone)]
pub struct ExactResult {
    pub solution: Option<Solution>,
    pub status: SolveStatus,
    /// Valid lower bound on the optimal cost at termination.
    pub best_bound: Money,
    pub incumbent_cost: Option<Money>,
    pub nodes_explored: u64,
    pub wall_time_s: f64,
    /// Incumbent updates in search order; costs are non-increasing.
    pub log: Vec<LogEntry>,
}

/// Oracle budget guard.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("enumeration budget exceeded: {0}")]
pub struct BudgetExceeded(String);

const CLOSED: usize = usize::MAX;
const NO_SERVER: usize = usize::MAX;

/// Static per-instance tables shared by the search.
struct Tables {
    n_i: usize,
    n_j: usize,
    robot_dem: Vec<f64>,
    human_dem: Vec<f64>,
    total_robot: f64,
    total_human: f64,
    /// Bitmask per (i, j): bit l set when level index l meets the SLA.
    mask: Vec<u8>,
    /// Additive marginal variable cost of site j at candidate i.
    mc: Vec<f64>,
    /// F_il per (i, level index).
    fixed: Vec<Money>,
    /// Minimum staffing cost (incl. supervision on MINCAP) per (i, level index).
    floor_staff: Vec<Money>,
    unit_robot: Vec<Money>,
    unit_human: Vec<Money>,
    min_cap: [PerResource<u32>; 3],
    max_cap: [PerResource<u32>; 3],
    max_cap_any: PerResource<u32>,
    alpha: f64,
    /// Sites in descending demand order (assignment branching order).
    site_order: Vec<usize>,
}

impl Tables {
    fn build(instance: &Instance) -> Tables {
        let n_i = instance.n_candidates();
        let n_j = instance.n_sites();
        let robot_dem: Vec<f64> = instance.sites.iter().map(|s| s.robot_demand()).collect();
        let human_dem: Vec<f64> = instance.sites.iter().map(|s| s.human_demand()).collect();
        let alpha = instance.scenario.supervision_ratio;

        let mut min_cap = [PerResource::new(0, 0); 3];
        let mut max_cap = [PerResource::new(0, 0); 3];
        for level in Level::ALL {
            let spec = instance.level_spec(level);
            min_cap[level.index()] = spec.min_cap;
            max_cap[level.index()] = spec.max_cap;
        }
        let max_cap_any = PerResource::new(
            max_cap.iter().map(|c| c.robot).max().unwrap(),
            max_cap.iter().map(|c| c.human).max().unwrap(),
        );

        let mut mask = vec![0u8; n_i * n_j];
        let mut mc = vec![0.0f64; n_i * n_j];
        let mut unit_robot = Vec::with_capacity(n_i);
        let mut unit_human = Vec::with_capacity(n_i);
        let mut fixed = vec![0; n_i * 3];
        let mut floor_staff = vec![0; n_i * 3];
        for i in 0..n_i {
            let unit = instance.candidates[i].unit_cost;
            unit_robot.push(unit.robot);
            unit_human.push(unit.human);
            for level in Level::ALL {
                let l = level.index();
                fixed[i * 3 + l] = instance.fixed_cost(i, level);
                let zr = min_cap[l].robot;
                let zh = min_cap[l]
                    .human
                    .max(ceil_tol(alpha * zr as f64));
                floor_staff[i * 3 + l] = unit.robot * zr as Money + unit.human * zh as Money;
            }
            for j in 0..n_j {
                let mut bits = 0u8;
                for level in Level::ALL {
                    if instance.within_sla(i, j, level) {
                        bits |= 1 << level.index();
                    }
                }
                mask[i * n_j + j] = bits;
                mc[i * n_j + j] = unit.robot as f64 * robot_dem[j]
                    + unit.human as f64 * human_dem[j];
            }
        }

        let mut site_order: Vec<usize> = (0..n_j).collect();
        site_order.sort_by(|&a, &b| {
            instance.sites[b]
                .demand_scu
                .partial_cmp(&instance.sites[a].demand_scu)
                .unwrap()
                .then(a.cmp(&b))
        });

        Tables {
            n_i,
            n_j,
            total_robot: robot_dem.iter().sum(),
            total_human: human_dem.iter().sum(),
            robot_dem,
            human_dem,
            mask,
            mc,
            fixed,
            floor_staff,
            unit_robot,
            unit_human,
            min_cap,
            max_cap,
            max_cap_any,
            alpha,
            site_order,
        }
    }

    fn mask_at(&self, i: usize, j: usize) -> u8 {
        self.mask[i * self.n_j + j]
    }

    fn mc_at(&self, i: usize, j: usize) -> f64 {
        self.mc[i * self.n_j + j]
    }

    /// Staffing counts for loads at a level; `None` when MAXCAP is breached.
    fn staff_for(&self, l: usize, robot_load: f64, human_load: f64) -> Option<(u32, u32)> {
        let zr = ceil_tol(robot_load).max(self.min_cap[l].robot);
        if zr > self.max_cap[l].robot {
            return None;
        }
        let zh = ceil_tol(human_load)
            .max(self.min_cap[l].human)
            .max(ceil_tol(self.alpha * zr as f64));
        if zh > self.max_cap[l].human {
            return None;
        }
        Some((zr, zh))
    }

    /// Exact staffing cost for candidate `i` at level `l` carrying the loads.
    fn staff_cost(&self, i: usize, l: usize, robot_load: f64, human_load: f64) -> Option<Money> {
        self.staff_for(l, robot_load, human_load)
            .map(|(zr, zh)| self.unit_robot[i] * zr as Money + self.unit_human[i] * zh as Money)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CandState {
    Undecided,
    Closed,
    Open(usize),
}

struct Search<'a> {
    instance: &'a Instance,
    t: &'a Tables,
    limits: SolverLimits,
    start: Instant,
    node_budget: u64,

    cand_state: Vec<CandState>,
    /// Per-site min additive cost over still-available candidates.
    min_mc: Vec<f64>,
    arg_mc: Vec<usize>,
    sum_min_mc: f64,
    unservable: usize,
    committed_fixed: Money,
    committed_floor: Money,
    cap_robot: f64,
    cap_human: f64,
    trail: Vec<(usize, f64, usize)>,
    /// Preferred branch per candidate, from the warm-start solution.
    preference: Vec<usize>,

    incumbent_cost: Option<Money>,
    incumbent: Option<Solution>,
    gap_pruned_min: f64,
    abandoned_min: f64,
    aborted: bool,
    nodes: u64,
    log: Vec<LogEntry>,
}

impl<'a> Search<'a> {
    fn new(instance: &'a Instance, t: &'a Tables, limits: SolverLimits) -> Search<'a> {
        let mut min_mc = vec![f64::INFINITY; t.n_j];
        let mut arg_mc = vec![NO_SERVER; t.n_j];
        let mut unservable = 0;
        let mut sum_min_mc = 0.0;
        for j in 0..t.n_j {
            let mut best = f64::INFINITY;
            let mut arg = NO_SERVER;
            for i in 0..t.n_i {
                if t.mask_at(i, j) != 0 && t.mc_at(i, j) < best {
                    best = t.mc_at(i, j);
                    arg = i;
                }
            }
            if arg == NO_SERVER {
                unservable += 1;
                min_mc[j] = 0.0;
            } else {
                min_mc[j] = best;
                sum_min_mc += best;
            }
            arg_mc[j] = arg;
        }
        Search {
            instance,
            t,
            node_budget: limits.node_limit.unwrap_or(u64::MAX),
            limits,
            start: Instant::now(),
            cand_state: vec![CandState::Undecided; t.n_i],
            min_mc,
            arg_mc,
            sum_min_mc,
            unservable,
            committed_fixed: 0,
            committed_floor: 0,
            cap_robot: t.max_cap_any.robot as f64 * t.n_i as f64,
            cap_human: t.max_cap_any.human as f64 * t.n_i as f64,
            trail: Vec::new(),
            preference: vec![CLOSED; t.n_i],
            incumbent_cost: None,
            incumbent: None,
            gap_pruned_min: f64::INFINITY,
            abandoned_min: f64::INFINITY,
            aborted: false,
            nodes: 0,
            log: Vec::new(),
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        if self.nodes >= self.node_budget
            || (self.nodes & 0x1ff == 0
                && self.start.elapsed().as_secs_f64() >= self.limits.time_limit_s)
        {
            self.aborted = true;
        }
        self.aborted
    }

    fn offer_incumbent(&mut self, cost: Money, solution: Solution) {
        if self.incumbent_cost.map_or(true, |c| cost < c) {
            self.incumbent_cost = Some(cost);
            self.incumbent = Some(solution);
            self.log.push(LogEntry {
                nodes: self.nodes,
                incumbent: Some(cost),
            });
        }
    }

    /// True when the subtree under a node with lower bound `lb` cannot
    /// matter: it either cannot strictly improve the incumbent, or it is
    /// within the accepted gap. The second case is recorded so the final
    /// bound certificate stays valid.
    fn prune(&mut self, lb: f64) -> bool {
        let Some(inc) = self.incumbent_cost else {
            return false;
        };
        let inc_f = inc as f64;
        if lb >= inc_f - 0.5 {
            return true;
        }
        if self.limits.gap_limit > 0.0 && lb >= inc_f / (1.0 + self.limits.gap_limit) + 1.0 {
            self.gap_pruned_min = self.gap_pruned_min.min(lb);
            return true;
        }
        false
    }

    fn config_bound(&self) -> f64 {
        self.committed_fixed as f64 + (self.committed_floor as f64).max(self.sum_min_mc)
    }

    /// Applies a level-or-closed decision for candidate `i`, maintaining
    /// per-site availability minima. Returns the trail mark for undo.
    fn apply_decision(&mut self, i: usize, choice: usize) -> usize {
        let mark = self.trail.len();
        let t = self.t;
        if choice == CLOSED {
            self.cand_state[i] = CandState::Closed;
            self.cap_robot -= t.max_cap_any.robot as f64;
            self.cap_human -= t.max_cap_any.human as f64;
        } else {
            self.cand_state[i] = CandState::Open(choice);
            self.committed_fixed += t.fixed[i * 3 + choice];
            self.committed_floor += t.floor_staff[i * 3 + choice];
            self.cap_robot += t.max_cap[choice].robot as f64 - t.max_cap_any.robot as f64;
            self.cap_human += t.max_cap[choice].human as f64 - t.max_cap_any.human as f64;
        }
        for j in 0..t.n_j {
            let bits = t.mask_at(i, j);
            if bits == 0 || self.arg_mc[j] != i {
                continue;
            }
            let keeps = choice != CLOSED && bits & (1 << choice) != 0;
            if keeps {
                continue;
            }
            // The cheapest server left; rescan the remaining candidates.
            self.trail.push((j, self.min_mc[j], self.arg_mc[j]));
            self.sum_min_mc -= self.min_mc[j];
            let mut best = f64::INFINITY;
            let mut arg = NO_SERVER;
            for k in 0..t.n_i {
                let kb = t.mask_at(k, j);
                if kb == 0 {
                    continue;
                }
                let available = match self.cand_state[k] {
                    CandState::Undecided => true,
                    CandState::Closed => false,
                    CandState::Open(l) => kb & (1 << l) != 0,
                };
                if available && t.mc_at(k, j) < best {
                    best = t.mc_at(k, j);
                    arg = k;
                }
            }
            if arg == NO_SERVER {
                self.unservable += 1;
                self.min_mc[j] = 0.0;
            } else {
                self.min_mc[j] = best;
                self.sum_min_mc += best;
            }
            self.arg_mc[j] = arg;
        }
        mark
    }

    fn undo_decision(&mut self, i: usize, choice: usize, mark: usize) {
        let t = self.t;
        while self.trail.len() > mark {
            let (j, old_min, old_arg) = self.trail.pop().unwrap();
            if self.arg_mc[j] == NO_SERVER {
                self.unservable -= 1;
            } else {
                self.sum_min_mc -= self.min_mc[j];
            }
            self.min_mc[j] = old_min;
            self.arg_mc[j] = old_arg;
            self.sum_min_mc += old_min;
        }
        if choice == CLOSED {
            self.cap_robot += t.max_cap_any.robot as f64;
            self.cap_human += t.max_cap_any.human as f64;
        } else {
            self.committed_fixed -= t.fixed[i * 3 + choice];
            self.committed_floor -= t.floor_staff[i * 3 + choice];
            self.cap_robot -= t.max_cap[choice].robot as f64 - t.max_cap_any.robot as f64;
            self.cap_human -= t.max_cap[choice].human as f64 - t.max_cap_any.human as f64;
        }
        self.cand_state[i] = CandState::Undecided;
    }

    fn decide(&mut self, i: usize) {
        self.nodes += 1;
        if self.unservable > 0
            || self.t.total_robot > self.cap_robot + EPS
            || self.t.total_human > self.cap_human + EPS
        {
            return;
        }
        let lb = self.config_bound();
        if self.prune(lb) {
            return;
        }
        if self.out_of_budget() {
            self.abandoned_min = self.abandoned_min.min(lb);
            return;
        }
        if i == self.t.n_i {
            self.enter_assignment();
            return;
        }
        // Warm-start choice first, then closed, then levels cheap to dear.
        let mut order = [self.preference[i], CLOSED, 2, 1, 0];
        let mut len = 1;
        for &c in &[CLOSED, 2, 1, 0] {
            if c != order[0] {
                order[len] = c;
                len += 1;
            }
        }
        for idx in 0..len {
            let choice = order[idx];
            let mark = self.apply_decision(i, choice);
            self.decide(i + 1);
            self.undo_decision(i, choice, mark);
            if self.aborted {
                return;
            }
        }
    }

    /// All candidates are decided; branch over site assignments.
    fn enter_assignment(&mut self) {
        let t = self.t;
        let open: Vec<(usize, usize)> = self
            .cand_state
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                CandState::Open(l) => Some((i, *l)),
                _ => None,
            })
            .collect();
        if t.n_j == 0 {
            // Degenerate instance: nothing to serve, nothing to staff.
            let cost = self.committed_fixed + self.committed_floor;
            let mut solution = Solution::empty(t.n_i);
            for &(i, l) in &open {
                let level = Level::ALL.iter().copied().find(|x| x.index() == l).unwrap();
                let staff = minimal_staffing(self.instance, &[], level).expect("mincap staffing");
                solution.facilities[i] = Some(OpenFacility { level, staff });
            }
            self.offer_incumbent(cost, solution);
            return;
        }

        // Suffix sums of per-site minima over the fixed open set; min_mc is
        // exactly that once every candidate is decided.
        let mut suffix = vec![0.0f64; t.n_j + 1];
        for k in (0..t.n_j).rev() {
            suffix[k] = suffix[k + 1] + self.min_mc[t.site_order[k]];
        }

        let mut ctx = AssignCtx {
            open,
            robot_load: Vec::new(),
            human_load: Vec::new(),
            lin: Vec::new(),
            staff_cost: Vec::new(),
            sum_lin: 0.0,
            sum_staff: 0,
            suffix,
            chosen: vec![NO_SERVER; t.n_j],
        };
        for &(i, l) in &ctx.open {
            let cost = self
                .t
                .staff_cost(i, l, 0.0, 0.0)
                .expect("mincap staffing fits capacity");
            ctx.staff_cost.push(cost);
            ctx.sum_staff += cost;
            ctx.robot_load.push(0.0);
            ctx.human_load.push(0.0);
            ctx.lin.push(0.0);
        }
        self.assign(&mut ctx, 0);
    }

    fn assign(&mut self, ctx: &mut AssignCtx, k: usize) {
        self.nodes += 1;
        let lb = self.committed_fixed as f64
            + (ctx.sum_staff as f64).max(ctx.sum_lin + ctx.suffix[k]);
        if self.prune(lb) {
            return;
        }
        if self.out_of_budget() {
            self.abandoned_min = self.abandoned_min.min(lb);
            return;
        }
        if k == self.t.n_j {
            self.close_leaf(ctx);
            return;
        }
        let j = self.t.site_order[k];
        // Children ordered by true incremental staffing cost.
        let mut children: Vec<(Money, usize)> = Vec::with_capacity(ctx.open.len());
        for (slot, &(i, l)) in ctx.open.iter().enumerate() {
            if self.t.mask_at(i, j) & (1 << l) == 0 {
                continue;
            }
            let new_cost = self.t.staff_cost(
                i,
                l,
                ctx.robot_load[slot] + self.t.robot_dem[j],
                ctx.human_load[slot] + self.t.human_dem[j],
            );
            if let Some(cost) = new_cost {
                children.push((cost - ctx.staff_cost[slot], slot));
            }
        }
        children.sort_by_key(|&(delta, slot)| (delta, ctx.open[slot].0));
        for (delta, slot) in children {
            let (i, _) = ctx.open[slot];
            ctx.chosen[j] = i;
            ctx.robot_load[slot] += self.t.robot_dem[j];
            ctx.human_load[slot] += self.t.human_dem[j];
            ctx.sum_staff += delta;
            ctx.staff_cost[slot] += delta;
            let lin_delta = self.t.mc_at(i, j);
            ctx.lin[slot] += lin_delta;
            ctx.sum_lin += lin_delta;

            self.assign(ctx, k + 1);

            ctx.chosen[j] = NO_SERVER;
            ctx.robot_load[slot] -= self.t.robot_dem[j];
            ctx.human_load[slot] -= self.t.human_dem[j];
            ctx.sum_staff -= delta;
            ctx.staff_cost[slot] -= delta;
            ctx.lin[slot] -= lin_delta;
            ctx.sum_lin -= lin_delta;
            if self.aborted {
                return;
            }
        }
    }

    /// Complete assignment: restaff canonically and offer the incumbent.
    fn close_leaf(&mut self, ctx: &AssignCtx) {
        let mut solution = Solution {
            facilities: vec![None; self.t.n_i],
            assignment: ctx.chosen.clone(),
        };
        let mut sites_of: Vec<Vec<usize>> = vec![Vec::new(); ctx.open.len()];
        let mut slot_of = vec![usize::MAX; self.t.n_i];
        for (slot, &(i, _)) in ctx.open.iter().enumerate() {
            slot_of[i] = slot;
        }
        for j in 0..self.t.n_j {
            sites_of[slot_of[ctx.chosen[j]]].push(j);
        }
        for (slot, &(i, l)) in ctx.open.iter().enumerate() {
            let level = Level::ALL.iter().copied().find(|x| x.index() == l).unwrap();
            let Ok(staff) = minimal_staffing(self.instance, &sites_of[slot], level) else {
                return;
            };
            solution.facilities[i] = Some(OpenFacility { level, staff });
        }
        let Ok(cost) = objective(self.instance, &solution) else {
            return;
        };
        self.offer_incumbent(cost.total, solution);
    }
}

struct AssignCtx {
    open: Vec<(usize, usize)>,
    robot_load: Vec<f64>,
    human_load: Vec<f64>,
    lin: Vec<f64>,
    staff_cost: Vec<Money>,
    sum_lin: f64,
    sum_staff: Money,
    suffix: Vec<f64>,
    chosen: Vec<usize>,
}

/// Branch-and-bound solve. Deterministic for a fixed instance and limits;
/// the warm start comes from the constructive greedy, run against the same
/// deadline.
pub fn solve_exact(instance: &Instance, limits: &SolverLimits) -> ExactResult {
    // Deep recursion (|I| + |J| frames); run on a roomy stack.
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .name("hrcd-exact".into())
            .stack_size(64 << 20)
            .spawn_scoped(scope, || solve_exact_inner(instance, limits))
            .expect("spawn solver thread")
            .join()
            .expect("solver thread panicked")
    })
}

fn solve_exact_inner(instance: &Instance, limits: &SolverLimits) -> ExactResult {
    let start = Instant::now();
    let t = Tables::build(instance);

    // A site no (candidate, level) pair can reach is a proof of
    // infeasibility before any search.
    for j in 0..t.n_j {
        if (0..t.n_i).all(|i| t.mask_at(i, j) == 0) {
            return ExactResult {
                solution: None,
                status: SolveStatus::InfeasibleProven,
                best_bound: Money::MAX,
                incumbent_cost: None,
                nodes_explored: 0,
                wall_time_s: start.elapsed().as_secs_f64(),
                log: Vec::new(),
            };
        }
    }

    let mut search = Search::new(instance, &t, limits.clone());
    search.start = start;

    // Warm start: the two-stage heuristic against a slice of the budget.
    // A tight incumbent is what lets the bound close the plateau of
    // near-equal assignments.
    let seed_budget = limits.time_limit_s * 0.3;
    let seed_deadline = start + std::time::Duration::from_secs_f64(seed_budget);
    if let Ok(built) = heuristic::construct_greedy_with_deadline(instance, Some(seed_deadline)) {
        let remaining = seed_budget - start.elapsed().as_secs_f64();
        let seed = if remaining > 0.0 {
            let params = heuristic::HeuristicParams {
                time_limit_s: Some(remaining),
                ..heuristic::HeuristicParams::default()
            };
            heuristic::local_search(instance, &built, &params).0
        } else {
            built
        };
        if let Ok(cost) = objective(instance, &seed) {
            for (i, fac) in seed.facilities.iter().enumerate() {
                search.preference[i] = fac.map_or(CLOSED, |f| f.level.index());
            }
            search.offer_incumbent(cost.total, seed);
        }
    }

    search.decide(0);

    let wall_time_s = start.elapsed().as_secs_f64();
    let nodes_explored = search.nodes;
    let log = std::mem::take(&mut search.log);
    let pruned_floor = search.gap_pruned_min;
    let abandoned = search.abandoned_min;

    match (search.incumbent_cost, search.aborted) {
        (Some(cost), false) => ExactResult {
            best_bound: bound_from(cost, pruned_floor.min(f64::INFINITY), f64::INFINITY),
            solution: search.incumbent,
            status: SolveStatus::Optimal,
            incumbent_cost: Some(cost),
            nodes_explored,
            wall_time_s,
            log,
        },
        (Some(cost), true) => ExactResult {
            best_bound: bound_from(cost, pruned_floor, abandoned),
            solution: search.incumbent,
            status: SolveStatus::FeasibleAtLimit,
            incumbent_cost: Some(cost),
            nodes_explored,
            wall_time_s,
            log,
        },
        (None, false) => ExactResult {
            solution: None,
            status: SolveStatus::InfeasibleProven,
            best_bound: Money::MAX,
            incumbent_cost: None,
            nodes_explored,
            wall_time_s,
            log,
        },
        (None, true) => ExactResult {
            solution: None,
            status: SolveStatus::LimitNoSolution,
            best_bound: if abandoned.is_finite() {
                abandoned.floor() as Money
            } else {
                0
            },
            incumbent_cost: None,
            nodes_explored,
            wall_time_s,
            log,
        },
    }
}

fn bound_from(incumbent: Money, gap_pruned: f64, abandoned: f64) -> Money {
    let floor = gap_pruned.min(abandoned);
    if floor.is_finite() {
        (incumbent as f64).min(floor).floor() as Money
    } else {
        incumbent
    }
}

/// Exhaustive oracle: enumerates every facility-level configuration and
/// every single-sourced assignment, staffing each leaf minimally. Only for
/// toy sizes; independent of the branch-and-bound path above.
pub fn brute_force_optimum(instance: &Instance) -> Result<ExactResult, BudgetExceeded> {
    let n_i = instance.n_candidates();
    let n_j = instance.n_sites();
    if n_i > 5 || n_j > 10 {
        return Err(BudgetExceeded(format!(
            "{n_i} candidates x {n_j} sites exceeds the 5 x 10 oracle guard"
        )));
    }
    if instance.levels.len() != Level::COUNT {
        return Err(BudgetExceeded("oracle expects exactly three levels".into()));
    }
    let start = Instant::now();
    let t = Tables::build(instance);

    let mut best: Option<(Money, Solution)> = None;
    let mut nodes: u64 = 0;
    let mut any_feasible_sla = true;
    for j in 0..n_j {
        if (0..n_i).all(|i| t.mask_at(i, j) == 0) {
            any_feasible_sla = false;
        }
    }

    if any_feasible_sla {
        // Odometer over configurations: digit 0 = closed, 1 + l = level l.
        let n_configs = 4usize.pow(n_i as u32);
        let mut levels = vec![CLOSED; n_i];
        for code in 0..n_configs {
            let mut c = code;
            for slot in levels.iter_mut() {
                let digit = c % 4;
                *slot = if digit == 0 { CLOSED } else { digit - 1 };
                c /= 4;
            }
            let open: Vec<(usize, usize)> = levels
                .iter()
                .enumerate()
                .filter(|(_, &l)| l != CLOSED)
                .map(|(i, &l)| (i, l))
                .collect();
            if n_j > 0 {
                let coverable = (0..n_j).all(|j| {
                    open.iter().any(|&(i, l)| t.mask_at(i, j) & (1 << l) != 0)
                });
                if !coverable {
                    continue;
                }
            }
            enumerate_assignments(
                instance,
                &t,
                &open,
                &mut vec![NO_SERVER; n_j],
                &mut vec![(0.0, 0.0); open.len()],
                0,
                &mut nodes,
                &mut best,
            );
        }
    }

    let wall_time_s = start.elapsed().as_secs_f64();
    Ok(match best {
        Some((cost, solution)) => ExactResult {
            solution: Some(solution),
            status: SolveStatus::Optimal,
            best_bound: cost,
            incumbent_cost: Some(cost),
            nodes_explored: nodes,
            wall_time_s,
            log: Vec::new(),
        },
        None => ExactResult {
            solution: None,
            status: SolveStatus::InfeasibleProven,
            best_bound: Money::MAX,
            incumbent_cost: None,
            nodes_explored: nodes,
            wall_time_s,
            log: Vec::new(),
        },
    })
}

#[allow(clippy::too_many_arguments)]
fn enumerate_assignments(
    instance: &Instance,
    t: &Tables,
    open: &[(usize, usize)],
    chosen: &mut Vec<usize>,
    loads: &mut Vec<(f64, f64)>,
    j: usize,
    nodes: &mut u64,
    best: &mut Option<(Money, Solution)>,
) {
    *nodes += 1;
    if j == t.n_j {
        let mut solution = Solution {
            facilities: vec![None; t.n_i],
            assignment: chosen.clone(),
        };
        for (slot, &(i, l)) in open.iter().enumerate() {
            let sites: Vec<usize> = (0..t.n_j).filter(|&s| chosen[s] == i).collect();
            let level = Level::ALL[0..3]
                .iter()
                .copied()
                .find(|x| x.index() == l)
                .unwrap();
            let Ok(staff) = minimal_staffing(instance, &sites, level) else {
                return;
            };
            solution.facilities[i] = Some(OpenFacility { level, staff });
            let _ = slot;
        }
        if let Ok(cost) = objective(instance, &solution) {
            if best.as_ref().map_or(true, |(c, _)| cost.total < *c) {
                *best = Some((cost.total, solution));
            }
        }
        return;
    }
    for (slot, &(i, l)) in open.iter().enumerate() {
        if t.mask_at(i, j) & (1 << l) == 0 {
            continue;
        }
        let (r, h) = loads[slot];
        let nr = r + t.robot_dem[j];
        let nh = h + t.human_dem[j];
        // Capacity-only pruning keeps the enumeration exhaustive over the
        // feasible space.
        if nr > t.max_cap[l].robot as f64 + EPS || nh > t.max_cap[l].human as f64 + EPS {
            continue;
        }
        loads[slot] = (nr, nh);
        chosen[j] = i;
        enumerate_assignments(instance, t, open, chosen, loads, j + 1, nodes, best);
        chosen[j] = NO_SERVER;
        loads[slot] = (r, h);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{default_level_specs, generate_instance, GeneratorParams};
    use crate::instance::{
        validate_instance, CandidateLocation, Coords, DemandSite, InstanceMeta, ScenarioConfig,
        Tier,
    };
    use crate::model::check_feasibility;

    /// Two candidates, custom response times: candidate 1 is out of range
    /// for everyone, candidate 0 reaches the sites only at high level.
    fn forced_config_instance() -> Instance {
        let candidates = vec![
            CandidateLocation {
                id: 0,
                coords: Coords::new(26.3, 50.15),
                base_fixed_cost: 80_000,
                unit_cost: PerResource::new(1200, 3000),
            },
            CandidateLocation {
                id: 1,
                coords: Coords::new(26.5, 50.4),
                base_fixed_cost: 70_000,
                unit_cost: PerResource::new(1200, 3000),
            },
        ];
        let sites: Vec<DemandSite> = (0..3)
            .map(|id| DemandSite {
                id,
                coords: Coords::new(26.31, 50.16),
                tier: Tier::Tier1,
                demand_scu: 16.0,
                mix_ratio: 1.5,
                sla_minutes: 5.0,
            })
            .collect();
        // Row-major (i, j, l); level order High, Medium, Low.
        let mut response_time = Vec::new();
        for i in 0..2 {
            for _j in 0..3 {
                if i == 0 {
                    response_time.extend_from_slice(&[4.0, 6.0, 10.0]);
                } else {
                    response_time.extend_from_slice(&[40.0, 60.0, 100.0]);
                }
            }
        }
        Instance {
            meta: InstanceMeta::default(),
            scenario: ScenarioConfig::conservative(),
            levels: default_level_specs(),
            candidates,
            sites,
            response_time,
            big_m: 1000.0,
            fixed_cost_override: None,
        }
    }

    #[test]
    fn forced_configuration_is_found_optimal() {
        let instance = forced_config_instance();
        let result = solve_exact(&instance, &SolverLimits::exact(30.0));
        assert_eq!(result.status, SolveStatus::Optimal);
        let solution = result.solution.expect("solution");
        assert_eq!(
            solution.facilities[0].map(|f| f.level),
            Some(Level::High),
            "all sites demand candidate 0 at high level"
        );
        assert!(solution.facilities[1].is_none());
        assert!(check_feasibility(&instance, &solution)
            .unwrap()
            .is_feasible());
        assert_eq!(
            objective(&instance, &solution).unwrap().total,
            result.incumbent_cost.unwrap()
        );
    }

    #[test]
    fn unreachable_sla_is_proven_infeasible() {
        let mut instance = forced_config_instance();
        // Push every response time past the 5-minute SLA.
        for t in instance.response_time.iter_mut() {
            *t += 100.0;
        }
        instance.big_m = 2000.0;
        let exact = solve_exact(&instance, &SolverLimits::exact(10.0));
        assert_eq!(exact.status, SolveStatus::InfeasibleProven);
        let oracle = brute_force_optimum(&instance).unwrap();
        assert_eq!(oracle.status, SolveStatus::InfeasibleProven);
    }

    #[test]
    fn single_candidate_single_site_picks_the_cheapest_level() {
        let mut instance = forced_config_instance();
        instance.candidates.truncate(1);
        instance.sites.truncate(1);
        instance.sites[0].sla_minutes = 7.0; // medium now qualifies
        instance.response_time = vec![4.0, 6.0, 10.0];
        assert!(validate_instance(&instance).is_empty());
        let oracle = brute_force_optimum(&instance).unwrap();
        let solution = oracle.solution.expect("feasible");
        // Medium is feasible and cheaper than high: 80k * 1.0 fixed.
        assert_eq!(solution.facilities[0].map(|f| f.level), Some(Level::Medium));
        let exact = solve_exact(&instance, &SolverLimits::exact(10.0));
        assert_eq!(exact.incumbent_cost, oracle.incumbent_cost);
    }

    #[test]
    fn matches_the_oracle_on_random_instances() {
        for seed in 0..20u64 {
            let params = GeneratorParams::new(
                seed,
                2 + (seed % 3) as usize,
                3 + (seed % 6) as usize,
                ScenarioConfig::preset(crate::instance::ScenarioName::ALL[(seed % 3) as usize]),
            );
            let instance = generate_instance(&params);
            let oracle = brute_force_optimum(&instance).unwrap();
            let exact = solve_exact(&instance, &SolverLimits::exact(60.0));
            assert_eq!(exact.status, oracle.status, "seed {seed}");
            assert_eq!(
                exact.incumbent_cost, oracle.incumbent_cost,
                "seed {seed}: bnb vs enumeration"
            );
            if let Some(solution) = &exact.solution {
                assert!(check_feasibility(&instance, solution).unwrap().is_feasible());
            }
        }
    }

    #[test]
    fn oracle_budget_guard_trips() {
        let params = GeneratorParams::new(1, 6, 4, ScenarioConfig::conservative());
        let instance = generate_instance(&params);
        assert!(brute_force_optimum(&instance).is_err());
    }

    #[test]
    fn optimal_cost_never_rises_as_supervision_relaxes() {
        let params = GeneratorParams::new(11, 3, 6, ScenarioConfig::conservative());
        let base = generate_instance(&params);
        let mut costs = Vec::new();
        for alpha in [1.0 / 3.0, 1.0 / 5.0, 1.0 / 10.0] {
            let mut instance = base.clone();
            instance.scenario.supervision_ratio = alpha;
            let result = solve_exact(&instance, &SolverLimits::exact(30.0));
            costs.push(result.incumbent_cost.expect("feasible"));
        }
        assert!(costs[0] >= costs[1] && costs[1] >= costs[2], "{costs:?}");
    }

    #[test]
    fn incumbents_in_the_log_never_increase() {
        let params = GeneratorParams::new(5, 8, 25, ScenarioConfig::balanced());
        let instance = generate_instance(&params);
        let result = solve_exact(&instance, &SolverLimits::exact(30.0));
        let incumbents: Vec<Money> = result.log.iter().filter_map(|e| e.incumbent).collect();
        assert!(!incumbents.is_empty());
        for pair in incumbents.windows(2) {
            assert!(pair[1] <= pair[0], "incumbent went up: {pair:?}");
        }
        assert_eq!(result.status, SolveStatus::Optimal);
        assert!(result.best_bound <= result.incumbent_cost.unwrap());
    }

    #[test]
    fn time_limit_is_respected() {
        let params = GeneratorParams::new(2, 40, 400, ScenarioConfig::conservative());
        let instance = generate_instance(&params);
        let limits = SolverLimits {
            time_limit_s: 0.2,
            gap_limit: 0.0,
            node_limit: None,
        };
        let start = Instant::now();
        let result = solve_exact(&instance, &limits);
        assert!(
            start.elapsed().as_secs_f64() < 30.0,
            "run overshot a 0.2 s budget by orders of magnitude"
        );
        assert!(matches!(
            result.status,
            SolveStatus::FeasibleAtLimit | SolveStatus::LimitNoSolution
        ));
    }
}
