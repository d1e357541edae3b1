use ricci_bound::catalog;
use ricci_bound::pipeline::analyze;
use ricci_bound::potential::{KahlerPotential, SymplecticPotential};
use ricci_bound::solver::grid::{auto_half_width, Grid, PotentialField};
use num_traits::ToPrimitive;

fn main() {
    let e = catalog::entry("ws5-5-4-3").unwrap();
    let geo = analyze(&e.cone).unwrap();
    let sp = SymplecticPotential::from_polytope(&geo.polytope, &geo.vpolytope);
    let kp = KahlerPotential::new(sp, geo.summary.volume.to_f64().unwrap()).unwrap();
    let l = auto_half_width(&kp).unwrap();
    let n = 96usize;
    let grid = Grid::new(2, l, n).unwrap();
    let field = PotentialField::compute(&kp, &grid).unwrap();
    let u0 = &field.u0;
    let h2 = grid.h * grid.h;
    let mut worst_violator_weight: f64 = 0.0;
    let mut count = 0;
    let mut min_det_at_w6 = f64::INFINITY;
    for i in 1..n {
        for j in 1..n {
            let u = |a: usize, b: usize| u0[grid.id2(a, b)];
            let dxx = (u(i+1,j) - 2.0*u(i,j) + u(i-1,j)) / h2;
            let dyy = (u(i,j+1) - 2.0*u(i,j) + u(i,j-1)) / h2;
            let dxy = (u(i+1,j+1) + u(i-1,j-1) - u(i+1,j-1) - u(i-1,j+1)) / (4.0*h2);
            let det = dxx*dyy - dxy*dxy;
            let w = (-6.0 * u(i,j)).exp();
            if det <= 0.0 || dxx <= 0.0 {
                count += 1;
                worst_violator_weight = worst_violator_weight.max(w);
            }
            if w > 1e-6 {
                min_det_at_w6 = min_det_at_w6.min(det);
            }
        }
    }
    println!("violators: {count}, max weight among them: {worst_violator_weight:.3e}");
    println!("min det among weight>1e-6 nodes: {min_det_at_w6:.3e}");
}
