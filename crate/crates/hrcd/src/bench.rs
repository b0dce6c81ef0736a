//! Scenario runner: generates instances, runs the requested solvers,
//! re-evaluates every emitted solution through the model layer, and emits
//! aligned text tables plus CSV.

use std::fmt;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::exact::{solve_exact, SolveStatus, SolverLimits};
use crate::generate::{generate_instance, GeneratorParams};
use crate::heuristic::{solve_heuristic, HeuristicParams, SearchTrace};
use crate::instance::{save_instance, Instance, Money, ResourceKind, ScenarioConfig, ScenarioName};
use crate::model::{
    check_feasibility, objective, optimality_gap, save_solution, Solution, SolutionDoc,
    SolutionMeta,
};

/// Problem sizes of the two published experiments, or a custom one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Small,
    Large,
    Custom(usize, usize),
}

impl Scale {
    pub fn dimensions(self) -> (usize, usize) {
        match self {
            Scale::Small => (15, 50),
            Scale::Large => (500, 5000),
            Scale::Custom(candidates, sites) => (candidates, sites),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Exact,
    Heuristic,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Exact => write!(f, "exact"),
            Method::Heuristic => write!(f, "heuristic"),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Method::Exact),
            "heuristic" => Ok(Method::Heuristic),
            other => Err(format!("unknown method '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Optimal,
    Feasible,
    FeasibleAtLimit,
    LimitNoSolution,
    Infeasible,
}

impl RunStatus {
    fn from_exact(status: SolveStatus) -> RunStatus {
        match status {
            SolveStatus::Optimal => RunStatus::Optimal,
            SolveStatus::FeasibleAtLimit => RunStatus::FeasibleAtLimit,
            SolveStatus::LimitNoSolution => RunStatus::LimitNoSolution,
            SolveStatus::InfeasibleProven => RunStatus::Infeasible,
        }
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RunStatus::Optimal => "optimal",
            RunStatus::Feasible => "feasible",
            RunStatus::FeasibleAtLimit => "feasible-at-limit",
            RunStatus::LimitNoSolution => "limit-no-solution",
            RunStatus::Infeasible => "infeasible",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for RunStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "optimal" => Ok(RunStatus::Optimal),
            "feasible" => Ok(RunStatus::Feasible),
            "feasible-at-limit" => Ok(RunStatus::FeasibleAtLimit),
            "limit-no-solution" => Ok(RunStatus::LimitNoSolution),
            "infeasible" => Ok(RunStatus::Infeasible),
            other => Err(format!("unknown status '{other}'")),
        }
    }
}

/// What to run: the cross product of scenarios, seeds, and methods at one
/// scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub scale: Scale,
    pub scenarios: Vec<ScenarioName>,
    pub methods: Vec<Method>,
    pub seeds: Vec<u64>,
    pub limits: SolverLimits,
    pub heuristic: HeuristicParams,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.scenarios.is_empty() {
            return Err("at least one scenario is required".into());
        }
        if self.methods.is_empty() {
            return Err("at least one method is required".into());
        }
        if self.seeds.is_empty() {
            return Err("at least one seed is required".into());
        }
        let (candidates, sites) = self.scale.dimensions();
        if candidates == 0 || sites == 0 {
            return Err("scale must have at least one candidate and one site".into());
        }
        Ok(())
    }

    /// Stable FNV-1a fingerprint of the spec, for run-directory naming.
    pub fn fingerprint(&self) -> String {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in format!("{self:?}").bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{hash:08x}")
    }
}

/// One (scenario, method, seed) outcome, plus the artifacts needed to
/// re-evaluate it.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scenario: ScenarioName,
    pub method: Method,
    pub seed: u64,
    pub facilities_opened: Option<usize>,
    pub robots_total: Option<u64>,
    pub humans_total: Option<u64>,
    pub cost: Option<Money>,
    pub wall_time_s: f64,
    pub gap_pct: Option<f64>,
    pub status: RunStatus,
    pub solution: Option<Solution>,
    pub trace: Option<SearchTrace>,
}

fn scenario_rank(name: ScenarioName) -> usize {
    ScenarioName::ALL.iter().position(|&s| s == name).unwrap()
}

fn row_from_solution(
    instance: &Instance,
    scenario: ScenarioName,
    method: Method,
    seed: u64,
    status: RunStatus,
    solution: Solution,
    wall_time_s: f64,
) -> ResultRow {
    debug_assert!(check_feasibility(instance, &solution)
        .map(|r| r.is_feasible())
        .unwrap_or(false));
    let cost = objective(instance, &solution).expect("solver output is structurally valid");
    ResultRow {
        scenario,
        method,
        seed,
        facilities_opened: Some(solution.open_count()),
        robots_total: Some(solution.total_staff(ResourceKind::Robot)),
        humans_total: Some(solution.total_staff(ResourceKind::Human)),
        cost: Some(cost.total),
        wall_time_s,
        gap_pct: None,
        status,
        solution: Some(solution),
        trace: None,
    }
}

fn failed_row(
    scenario: ScenarioName,
    method: Method,
    seed: u64,
    status: RunStatus,
    wall_time_s: f64,
) -> ResultRow {
    ResultRow {
        scenario,
        method,
        seed,
        facilities_opened: None,
        robots_total: None,
        humans_total: None,
        cost: None,
        wall_time_s,
        gap_pct: None,
        status,
        solution: None,
        trace: None,
    }
}

/// Runs the full protocol. Failures become rows with a failure status, not
/// errors; gaps are filled in wherever the matching exact cost exists.
pub fn run_experiment(spec: &ExperimentSpec) -> Vec<ResultRow> {
    spec.validate().expect("experiment spec must be valid");
    let (n_candidates, n_sites) = spec.scale.dimensions();
    let mut rows = Vec::new();

    for &scenario in &spec.scenarios {
        for &seed in &spec.seeds {
            let params = GeneratorParams::new(
                seed,
                n_candidates,
                n_sites,
                ScenarioConfig::preset(scenario),
            );
            let instance = generate_instance(&params);
            let mut exact_cost: Option<Money> = None;

            if spec.methods.contains(&Method::Exact) {
                let result = solve_exact(&instance, &spec.limits);
                let status = RunStatus::from_exact(result.status);
                let row = match result.solution {
                    Some(solution) => row_from_solution(
                        &instance,
                        scenario,
                        Method::Exact,
                        seed,
                        status,
                        solution,
                        result.wall_time_s,
                    ),
                    None => failed_row(scenario, Method::Exact, seed, status, result.wall_time_s),
                };
                exact_cost = row.cost;
                rows.push(row);
            }

            if spec.methods.contains(&Method::Heuristic) {
                let begin = Instant::now();
                match solve_heuristic(&instance, &spec.heuristic) {
                    Ok((solution, trace)) => {
                        let mut row = row_from_solution(
                            &instance,
                            scenario,
                            Method::Heuristic,
                            seed,
                            RunStatus::Feasible,
                            solution,
                            begin.elapsed().as_secs_f64(),
                        );
                        row.gap_pct = match (row.cost, exact_cost) {
                            (Some(h), Some(e)) => optimality_gap(h, e),
                            _ => None,
                        };
                        row.trace = Some(trace);
                        rows.push(row);
                    }
                    Err(_) => rows.push(failed_row(
                        scenario,
                        Method::Heuristic,
                        seed,
                        RunStatus::Infeasible,
                        begin.elapsed().as_secs_f64(),
                    )),
                }
            }
        }
    }

    // Canonical ordering regardless of execution order.
    rows.sort_by_key(|r| (scenario_rank(r.scenario), r.method, r.seed));
    rows
}

// ---------------------------------------------------------------------------
// Table and CSV emission
// ---------------------------------------------------------------------------

pub const CSV_HEADER: &str =
    "scenario,method,seed,facilities,robots,humans,cost,wall_time_s,gap_pct,status";

fn format_money(m: Money) -> String {
    let negative = m < 0;
    let digits = m.unsigned_abs().to_string();
    let mut out = String::new();
    for (idx, ch) in digits.chars().enumerate() {
        if idx > 0 && (digits.len() - idx) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    if negative {
        format!("-{out}")
    } else {
        out
    }
}

fn scenario_title(name: ScenarioName) -> &'static str {
    match name {
        ScenarioName::Conservative => "Conservative",
        ScenarioName::Balanced => "Balanced",
        ScenarioName::Future => "Future",
    }
}

fn method_title(method: Method) -> &'static str {
    match method {
        Method::Exact => "Exact",
        Method::Heuristic => "Heuristic",
    }
}

/// Renders the aligned text table (scenario-major blocks, method-minor
/// rows) and the CSV carrying the same data.
pub fn emit_table(rows: &[ResultRow]) -> (String, String) {
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for row in rows {
        let opt = |v: Option<String>| v.unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            row.scenario,
            row.method,
            row.seed,
            opt(row.facilities_opened.map(|v| v.to_string())),
            opt(row.robots_total.map(|v| v.to_string())),
            opt(row.humans_total.map(|v| v.to_string())),
            opt(row.cost.map(|v| v.to_string())),
            row.wall_time_s,
            opt(row.gap_pct.map(|v| v.to_string())),
            row.status,
        ));
    }

    let header = [
        "Scenario",
        "Method",
        "Facilities",
        "Robots",
        "Humans",
        "Cost ($)",
        "Time (s)",
        "Gap (%)",
    ];
    let dash = "--".to_string();
    let mut cells: Vec<[String; 8]> = Vec::with_capacity(rows.len());
    for row in rows {
        cells.push([
            scenario_title(row.scenario).to_string(),
            method_title(row.method).to_string(),
            row.facilities_opened
                .map_or_else(|| dash.clone(), |v| v.to_string()),
            row.robots_total
                .map_or_else(|| dash.clone(), |v| format_money(v as Money)),
            row.humans_total
                .map_or_else(|| dash.clone(), |v| format_money(v as Money)),
            row.cost.map_or_else(|| dash.clone(), format_money),
            format!("{:.2}", row.wall_time_s),
            row.gap_pct
                .map_or_else(|| dash.clone(), |v| format!("{v:.2}")),
        ]);
    }
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &cells {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.len());
        }
    }
    let render = |cols: &[String]| -> String {
        let mut line = String::new();
        for (k, cell) in cols.iter().enumerate() {
            if k > 0 {
                line.push_str("  ");
            }
            if k < 2 {
                line.push_str(&format!("{:<width$}", cell, width = widths[k]));
            } else {
                line.push_str(&format!("{:>width$}", cell, width = widths[k]));
            }
        }
        line.trim_end().to_string()
    };

    let header_cells: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    let mut text = render(&header_cells);
    text.push('\n');
    text.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
    text.push('\n');
    let mut prev_scenario: Option<ScenarioName> = None;
    for (row, line) in rows.iter().zip(cells.iter()) {
        if prev_scenario.is_some() && prev_scenario != Some(row.scenario) {
            text.push('\n');
        }
        prev_scenario = Some(row.scenario);
        text.push_str(&render(line));
        text.push('\n');
    }
    (text, csv)
}

/// Parses rows back out of the CSV emitted by [`emit_table`].
pub fn parse_csv(csv: &str) -> Result<Vec<ResultRow>, String> {
    let mut lines = csv.lines();
    let header = lines.next().ok_or("empty csv")?;
    if header != CSV_HEADER {
        return Err(format!("unexpected header: {header}"));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(format!("line {}: expected 10 fields", idx + 2));
        }
        let opt_parse = |s: &str| -> Option<String> {
            if s.is_empty() {
                None
            } else {
                Some(s.to_string())
            }
        };
        let parse_num = |s: Option<String>, what: &str| -> Result<Option<u64>, String> {
            s.map(|v| v.parse::<u64>().map_err(|e| format!("{what}: {e}")))
                .transpose()
        };
        rows.push(ResultRow {
            scenario: fields[0].parse().map_err(|e| format!("line {}: {e}", idx + 2))?,
            method: fields[1].parse().map_err(|e| format!("line {}: {e}", idx + 2))?,
            seed: fields[2].parse().map_err(|e| format!("line {}: {e}", idx + 2))?,
            facilities_opened: parse_num(opt_parse(fields[3]), "facilities")?.map(|v| v as usize),
            robots_total: parse_num(opt_parse(fields[4]), "robots")?,
            humans_total: parse_num(opt_parse(fields[5]), "humans")?,
            cost: opt_parse(fields[6])
                .map(|v| v.parse::<Money>().map_err(|e| e.to_string()))
                .transpose()?,
            wall_time_s: fields[7].parse().map_err(|e| format!("time: {e}"))?,
            gap_pct: opt_parse(fields[8])
                .map(|v| v.parse::<f64>().map_err(|e| e.to_string()))
                .transpose()?,
            status: fields[9].parse()?,
            solution: None,
            trace: None,
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Cost-reduction report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionEntry {
    pub scenario: ScenarioName,
    pub base_cost: Money,
    pub cost: Money,
    /// 100 * (base - cost) / base, one decimal.
    pub reduction_pct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReductionReport {
    pub base: ScenarioName,
    pub entries: Vec<ReductionEntry>,
}

impl fmt::Display for CostReductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Cost reduction vs {} (exact)", scenario_title(self.base))?;
        for e in &self.entries {
            writeln!(
                f,
                "  {:<12} {:>12} -> {:>12}  {:>5.1}%",
                scenario_title(e.scenario),
                format_money(e.base_cost),
                format_money(e.cost),
                e.reduction_pct
            )?;
        }
        Ok(())
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Pairwise exact-cost reductions against the Conservative scenario,
/// matched per seed and reported as medians across seeds.
pub fn cost_reduction_report(rows: &[ResultRow]) -> Result<CostReductionReport, String> {
    let base = ScenarioName::Conservative;
    let exact_cost = |scenario: ScenarioName, seed: u64| -> Option<Money> {
        rows.iter()
            .find(|r| r.scenario == scenario && r.method == Method::Exact && r.seed == seed)
            .and_then(|r| r.cost)
    };
    let base_seeds: Vec<u64> = rows
        .iter()
        .filter(|r| r.scenario == base && r.method == Method::Exact && r.cost.is_some())
        .map(|r| r.seed)
        .collect();
    if base_seeds.is_empty() {
        return Err("no exact conservative rows to use as a base".into());
    }

    let mut entries = Vec::new();
    for &scenario in &ScenarioName::ALL {
        if scenario == base {
            continue;
        }
        let mut reductions = Vec::new();
        let mut bases = Vec::new();
        let mut costs = Vec::new();
        for &seed in &base_seeds {
            let (Some(base_cost), Some(cost)) = (exact_cost(base, seed), exact_cost(scenario, seed))
            else {
                continue;
            };
            bases.push(base_cost as f64);
            costs.push(cost as f64);
            reductions.push(100.0 * (base_cost - cost) as f64 / base_cost as f64);
        }
        if reductions.is_empty() {
            continue;
        }
        let pct = median(&mut reductions);
        entries.push(ReductionEntry {
            scenario,
            base_cost: median(&mut bases).round() as Money,
            cost: median(&mut costs).round() as Money,
            reduction_pct: (pct * 10.0).round() / 10.0,
        });
    }
    if entries.is_empty() {
        return Err("need exact rows for at least two scenarios".into());
    }
    Ok(CostReductionReport { base, entries })
}

// ---------------------------------------------------------------------------
// Run-directory artifacts
// ---------------------------------------------------------------------------

/// Writes results.txt, results.csv, per-run solution documents, and
/// per-run heuristic traces under `dir`. Returns the paths written.
pub fn write_run_artifacts(
    dir: &Path,
    spec: &ExperimentSpec,
    rows: &[ResultRow],
) -> io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let (text, csv) = emit_table(rows);
    let results_txt = dir.join("results.txt");
    std::fs::write(&results_txt, &text)?;
    written.push(results_txt);
    let results_csv = dir.join("results.csv");
    std::fs::write(&results_csv, &csv)?;
    written.push(results_csv);

    let (n_candidates, n_sites) = spec.scale.dimensions();
    for row in rows {
        let stem = format!("{}-{}-{}", row.scenario, row.method, row.seed);
        if let (Some(solution), Some(cost)) = (&row.solution, row.cost) {
            let params = GeneratorParams::new(
                row.seed,
                n_candidates,
                n_sites,
                ScenarioConfig::preset(row.scenario),
            );
            let instance = generate_instance(&params);
            let breakdown = objective(&instance, solution)
                .expect("solution re-evaluates against its instance");
            assert_eq!(breakdown.total, cost, "stored cost must reproduce");
            let doc = SolutionDoc::new(
                solution,
                breakdown,
                SolutionMeta {
                    solver: row.method.to_string(),
                    wall_time_s: Some(row.wall_time_s),
                    gap_pct: row.gap_pct,
                },
            );
            let path = dir.join(format!("sol-{stem}.json"));
            std::fs::write(&path, save_solution(&doc))?;
            written.push(path);
        }
        if let Some(trace) = &row.trace {
            let mut out = String::from("iteration,cost\n");
            for (iter, cost) in &trace.cost_trajectory {
                out.push_str(&format!("{iter},{cost}\n"));
            }
            let path = dir.join(format!("trace-{stem}.csv"));
            std::fs::write(&path, out)?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Writes the generated instance for one (scenario, seed) cell of a spec;
/// used by the CLI to make benchmark runs reproducible offline.
pub fn write_instance_artifact(
    dir: &Path,
    spec: &ExperimentSpec,
    scenario: ScenarioName,
    seed: u64,
) -> io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let (n_candidates, n_sites) = spec.scale.dimensions();
    let params = GeneratorParams::new(seed, n_candidates, n_sites, ScenarioConfig::preset(scenario));
    let instance = generate_instance(&params);
    let path = dir.join(format!("instance-{scenario}-{seed}.json"));
    std::fs::write(&path, save_instance(&instance))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_spec() -> ExperimentSpec {
        ExperimentSpec {
            scale: Scale::Custom(4, 10),
            scenarios: vec![ScenarioName::Conservative],
            methods: vec![Method::Exact, Method::Heuristic],
            seeds: vec![7],
            limits: SolverLimits::exact(30.0),
            heuristic: HeuristicParams::default(),
        }
    }

    #[test]
    fn one_cell_produces_two_rows_with_nonnegative_gap() {
        let rows = run_experiment(&quick_spec());
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].method, Method::Exact);
        assert_eq!(rows[0].status, RunStatus::Optimal);
        assert!(rows[0].gap_pct.is_none());
        let gap = rows[1].gap_pct.expect("heuristic row has a gap");
        assert!(gap >= 0.0, "gap {gap}");
    }

    #[test]
    fn stored_solutions_reproduce_their_costs() {
        let rows = run_experiment(&quick_spec());
        let (n_candidates, n_sites) = Scale::Custom(4, 10).dimensions();
        for row in &rows {
            let params = GeneratorParams::new(
                row.seed,
                n_candidates,
                n_sites,
                ScenarioConfig::preset(row.scenario),
            );
            let instance = generate_instance(&params);
            let solution = row.solution.as_ref().expect("both runs succeed");
            let report = check_feasibility(&instance, solution).unwrap();
            assert!(report.is_feasible(), "{:?}", report.violations);
            assert_eq!(
                objective(&instance, solution).unwrap().total,
                row.cost.unwrap()
            );
        }
    }

    #[test]
    fn exact_costs_fall_as_scenarios_relax() {
        let spec = ExperimentSpec {
            scale: Scale::Custom(4, 9),
            scenarios: ScenarioName::ALL.to_vec(),
            methods: vec![Method::Exact],
            seeds: vec![1, 2],
            limits: SolverLimits::exact(60.0),
            heuristic: HeuristicParams::default(),
        };
        let rows = run_experiment(&spec);
        for seed in [1, 2] {
            let cost = |s: ScenarioName| {
                rows.iter()
                    .find(|r| r.scenario == s && r.seed == seed)
                    .and_then(|r| r.cost)
                    .expect("solved")
            };
            let (c, b, f) = (
                cost(ScenarioName::Conservative),
                cost(ScenarioName::Balanced),
                cost(ScenarioName::Future),
            );
            assert!(c >= b && b >= f, "seed {seed}: {c} {b} {f}");
        }
    }

    #[test]
    fn table_groups_by_scenario_and_renders_dashes() {
        let mut rows = Vec::new();
        for (rank, scenario) in ScenarioName::ALL.into_iter().enumerate() {
            rows.push(ResultRow {
                scenario,
                method: Method::Exact,
                seed: 42,
                facilities_opened: Some(4 - rank.min(1)),
                robots_total: Some(207),
                humans_total: Some(149),
                cost: Some(692_450),
                wall_time_s: 1.32,
                gap_pct: None,
                status: RunStatus::Optimal,
                solution: None,
                trace: None,
            });
            rows.push(ResultRow {
                scenario,
                method: Method::Heuristic,
                seed: 42,
                facilities_opened: if rank == 2 { None } else { Some(4) },
                robots_total: if rank == 2 { None } else { Some(207) },
                humans_total: if rank == 2 { None } else { Some(149) },
                cost: if rank == 2 { None } else { Some(692_450) },
                wall_time_s: 6.61,
                gap_pct: if rank == 2 { None } else { Some(0.0) },
                status: if rank == 2 {
                    RunStatus::Infeasible
                } else {
                    RunStatus::Feasible
                },
                solution: None,
                trace: None,
            });
        }
        let (text, csv) = emit_table(&rows);
        // Three scenario blocks separated by blank lines.
        assert_eq!(text.matches("\n\n").count(), 2);
        assert!(text.contains("692,450"));
        assert!(text.contains("--"));
        // Failed run renders empty CSV cells.
        assert!(csv.lines().last().unwrap().contains(",,,"));
    }

    #[test]
    fn csv_round_trips_to_the_same_table() {
        let rows = run_experiment(&quick_spec());
        let (text, csv) = emit_table(&rows);
        let parsed = parse_csv(&csv).unwrap();
        let (text2, csv2) = emit_table(&parsed);
        assert_eq!(text, text2);
        assert_eq!(csv, csv2);
    }

    #[test]
    fn reduction_report_matches_the_reference_arithmetic() {
        let row = |scenario, cost| ResultRow {
            scenario,
            method: Method::Exact,
            seed: 42,
            facilities_opened: Some(4),
            robots_total: Some(207),
            humans_total: Some(149),
            cost: Some(cost),
            wall_time_s: 1.0,
            gap_pct: None,
            status: RunStatus::Optimal,
            solution: None,
            trace: None,
        };
        let rows = vec![
            row(ScenarioName::Conservative, 692_450),
            row(ScenarioName::Balanced, 610_175),
            row(ScenarioName::Future, 508_000),
        ];
        let report = cost_reduction_report(&rows).unwrap();
        assert_eq!(report.entries.len(), 2);
        assert_eq!(report.entries[0].scenario, ScenarioName::Balanced);
        assert_eq!(report.entries[0].reduction_pct, 11.9);
        assert_eq!(report.entries[1].scenario, ScenarioName::Future);
        assert_eq!(report.entries[1].reduction_pct, 26.6);

        let identical = vec![
            row(ScenarioName::Conservative, 500_000),
            row(ScenarioName::Future, 500_000),
        ];
        let report = cost_reduction_report(&identical).unwrap();
        assert_eq!(report.entries[0].reduction_pct, 0.0);
    }

    #[test]
    fn missing_base_is_an_error() {
        let rows = vec![ResultRow {
            scenario: ScenarioName::Future,
            method: Method::Exact,
            seed: 1,
            facilities_opened: Some(3),
            robots_total: Some(1),
            humans_total: Some(1),
            cost: Some(100),
            wall_time_s: 0.1,
            gap_pct: None,
            status: RunStatus::Optimal,
            solution: None,
            trace: None,
        }];
        assert!(cost_reduction_report(&rows).is_err());
    }

    #[test]
    fn exhausted_budget_is_reported_not_crashed() {
        let spec = ExperimentSpec {
            scale: Scale::Custom(18, 120),
            scenarios: vec![ScenarioName::Conservative],
            methods: vec![Method::Exact],
            seeds: vec![3],
            limits: SolverLimits {
                time_limit_s: 0.02,
                gap_limit: 0.0,
                node_limit: None,
            },
            heuristic: HeuristicParams::default(),
        };
        let rows = run_experiment(&spec);
        assert_eq!(rows.len(), 1);
        assert!(matches!(
            rows[0].status,
            RunStatus::FeasibleAtLimit | RunStatus::LimitNoSolution
        ));
    }

    #[test]
    fn artifacts_land_in_the_run_directory() {
        let dir = std::env::temp_dir().join(format!("hrcd-bench-test-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let spec = quick_spec();
        let rows = run_experiment(&spec);
        let written = write_run_artifacts(&dir, &spec, &rows).unwrap();
        assert!(written.iter().any(|p| p.ends_with("results.csv")));
        assert!(written.iter().any(|p| p.ends_with("results.txt")));
        assert!(written
            .iter()
            .any(|p| p.file_name().unwrap().to_str().unwrap().starts_with("sol-")));
        assert!(written
            .iter()
            .any(|p| p.file_name().unwrap().to_str().unwrap().starts_with("trace-")));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
