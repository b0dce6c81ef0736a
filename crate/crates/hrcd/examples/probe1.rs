use hrcd::exact::{solve_exact, SolverLimits};
use hrcd::generate::{generate_instance, GeneratorParams};
use hrcd::ScenarioConfig;

fn main() {
    let params = GeneratorParams::new(42, 15, 50, ScenarioConfig::conservative());
    let instance = generate_instance(&params);
    for limit in [30.0, 120.0] {
        let r = solve_exact(&instance, &SolverLimits { time_limit_s: limit, gap_limit: 0.0, node_limit: None });
        println!("limit {limit}: {:?} inc {:?} bound {} nodes {} wall {:.1}s",
            r.status, r.incumbent_cost, r.best_bound, r.nodes_explored, r.wall_time_s);
        if r.status == hrcd::exact::SolveStatus::Optimal { break; }
    }
}
