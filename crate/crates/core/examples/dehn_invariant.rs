//! Exact class invariants in the formal wedge with symbolic parabolic potentials.

use itertools::Itertools;
use qhi::branching::total_order_branching;
use qhi::census;
use qhi::charge::solve_charge;
use qhi::cocycle::parabolic_coboundary;
use qhi::dehn::dehn_of_class;
use qhi::poly::Poly;
use qhi::scissors::extract_class;

fn main() -> anyhow::Result<()> {
    for (name, (t, h)) in census::all() {
        let u: Vec<Poly> = (0..t.vertex_count()).map(|k| Poly::var(&format!("u{k}"))).collect();
        let c = solve_charge(&t, &h)?;
        let (mut exact, mut modulo, mut total) = (0, 0, 0);
        for order in (0..t.vertex_count()).permutations(t.vertex_count()) {
            let Ok(b) = total_order_branching(&t, &order) else { continue };
            let w = dehn_of_class(&extract_class(&t, &b, &parabolic_coboundary(&t, &b, &u), &c));
            exact += w.is_zero() as usize;
            modulo += w.modulo_i_pi().is_zero() as usize;
            total += 1;
        }
        println!("{name:18} orders {total:3}  zero {exact:3}  zero modulo iπ {modulo:3}");
    }
    Ok(())
}
