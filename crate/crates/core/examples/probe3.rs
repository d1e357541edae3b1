use ricci_bound::catalog;
use ricci_bound::pipeline::analyze;
use ricci_bound::potential::{KahlerPotential, SymplecticPotential};
use num_traits::ToPrimitive;

fn main() {
    let e = catalog::entry("ws5-5-4-3").unwrap();
    let geo = analyze(&e.cone).unwrap();
    let sp = SymplecticPotential::from_polytope(&geo.polytope, &geo.vpolytope);
    let kp = KahlerPotential::new(sp, geo.summary.volume.to_f64().unwrap()).unwrap();
    // scan a horizontal line of the grid and check v/log_l consistency
    let mut worst_drift: f64 = 0.0;
    let mut worst_x = [0.0, 0.0];
    let mut warm: Option<ricci_bound::potential::DualPoint> = None;
    for k in 0..=200 {
        let x = [-12.0 + 24.0 * k as f64 / 200.0, 3.7];
        let p = kp.dual(&x, warm.as_ref()).unwrap();
        let affine = kp.sp().facet_values(&p.v);
        for (a, (&la, &sa)) in affine.iter().zip(&p.log_l).enumerate() {
            if la > 1e-10 {
                let drift = (la.ln() - sa).abs();
                if drift > worst_drift {
                    worst_drift = drift;
                    worst_x = x;
                }
                let _ = a;
            }
        }
        warm = Some(p);
    }
    println!("worst log drift on the line: {worst_drift:.3e} at {worst_x:?}");
    // same scan without warm starts
    let mut worst2: f64 = 0.0;
    for k in 0..=200 {
        let x = [-12.0 + 24.0 * k as f64 / 200.0, 3.7];
        let p = kp.dual(&x, None).unwrap();
        let affine = kp.sp().facet_values(&p.v);
        for (&la, &sa) in affine.iter().zip(&p.log_l) {
            if la > 1e-10 {
                worst2 = worst2.max((la.ln() - sa).abs());
            }
        }
    }
    println!("worst log drift cold-started: {worst2:.3e}");
    // u0 difference warm vs cold at a fixed point
    let x = [1.3, 3.7];
    let (u_cold, _) = kp.eval_with_dual(&x, None).unwrap();
    let mut warm: Option<ricci_bound::potential::DualPoint> = None;
    for k in 0..=50 {
        let xx = [-12.0 + (1.3 + 12.0) * k as f64 / 50.0, 3.7];
        let p = kp.dual(&xx, warm.as_ref()).unwrap();
        warm = Some(p);
    }
    let (u_warm, _) = kp.eval_with_dual(&x, warm.as_ref()).unwrap();
    println!("u0 cold {u_cold:.15} vs warm {u_warm:.15}, diff {:.3e}", (u_cold-u_warm).abs());
}
