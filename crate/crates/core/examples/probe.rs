use ricci_bound::catalog;
use ricci_bound::pipeline::analyze;
use ricci_bound::potential::{KahlerPotential, SymplecticPotential};
use ricci_bound::solver::{PathRunner, SolverConfig};
use ricci_bound::exact::rat;
use num_traits::ToPrimitive;
use std::time::Instant;

fn main() {
    let entry_name = std::env::args().nth(1).unwrap_or("ws3-3-2".into());
    let n: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(2048);
    let e = catalog::entry(&entry_name).unwrap_or_else(|| {
        // fallback: weighted s3 with custom a
        let a: f64 = entry_name.parse().unwrap();
        let mut e = catalog::entry("ws3-3-2").unwrap();
        e.cone = catalog::weighted_s3(rat((a * 4.0) as i64, 4));
        e
    });
    let geo = analyze(&e.cone).unwrap();
    let r_exact = geo.rreport.r.to_f64().unwrap();
    println!("entry {} : R_exact = {} = {:.6}", e.name, ricci_bound::exact::rat_to_string(&geo.rreport.r), r_exact);
    let sp = SymplecticPotential::from_polytope(&geo.polytope, &geo.vpolytope);
    let t0 = Instant::now();
    let kp = KahlerPotential::new(sp, geo.summary.volume.to_f64().unwrap()).unwrap();
    println!("c0 = {:.12} ({:.2?})", kp.c0(), t0.elapsed());
    let mut cfg = SolverConfig::default();
    cfg.n = Some(n);
    let t0 = Instant::now();
    let runner = PathRunner::new(&kp, geo.summary.barycenter.to_f64_vec(), cfg).unwrap();
    println!("grid: L = {:.3}, n = {}, h = {:.5} (setup {:.2?})", runner.grid.l, runner.grid.n, runner.grid.h, t0.elapsed());
    let t0 = Instant::now();
    match runner.run() {
        Ok(run) => {
            println!("path finished in {:.2?}; {} accepted states", t0.elapsed(), run.states.len());
            for s in &run.states {
                println!("t={:.4} sup_phi={:10.4e} m_t={:+.5} x_t={:?} lmin={:9.3e} argmin={} mass={:9.2e} mom={:9.2e} massnaive={:9.2e} it={}",
                    s.t, s.sup_phi, s.m_t, s.x_t.iter().map(|x| (x*1000.0).round()/1000.0).collect::<Vec<_>>(),
                    s.min_facet_distance, s.argmin_facet, s.mass_residual, s.moment_residual, s.mass_residual_naive, s.newton_iters);
            }
            println!("bracket: t_lo={:.4} t_hi={:?} reason={:?} R_num={:.4} err={:+.4}",
                run.bracket.t_lo, run.bracket.t_hi, run.bracket.reason, run.bracket.r_numeric,
                run.bracket.r_numeric - r_exact);
        }
        Err(e) => println!("path error: {e}"),
    }
}
