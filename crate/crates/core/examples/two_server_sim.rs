//! Full protocol run: clients upload key shares, two servers aggregate over a
//! region cover, the requester combines and the result matches the oracle.

use espat::ingest::{oracle_count, uniform_points};
use espat::prg::Lambda;
use espat::sim::{cover_queries, plan_queries, Deployment, Scheme, Simulation};
use espat::spatial::GridConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let grid = GridConfig::new([39.6, 116.0, 0.0], [40.2, 116.8, 500.0], 4).unwrap();
    let dep = Deployment::new(grid, Lambda::L128).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let points = uniform_points(300, &dep.grid, &mut rng);

    for scheme in [Scheme::B, Scheme::Plus] {
        let plan = plan_queries(&cover_queries(&dep, 1), &dep, scheme).unwrap();
        let mut sim = Simulation::new(dep.clone(), scheme, plan.regions.clone()).unwrap();
        for p in &points {
            sim.submit_point(p, &mut rng).unwrap();
        }
        let result = sim.finish().unwrap();
        let oracle = oracle_count(&points, &plan.regions, &dep);
        println!("{scheme}: octant counts {:?}", plan.query_counts_of(&result));
        println!("  exact match with oracle: {}", result.counts == oracle.counts);
        println!("  mean client upload {:.0} bytes", sim.accounting().per_client_upload());
    }
}
