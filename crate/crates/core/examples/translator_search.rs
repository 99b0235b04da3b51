//! Finds every (b, A)-linear translator of the relative trace F_16 -> F_4
//! and of a random function, for A = identity.

use std::sync::Arc;

use lintrans::translators::search_translators;
use lintrans::{AdditivePerm, FieldFn, FieldTower, Level};

fn main() -> lintrans::Result<()> {
    let t = FieldTower::build(2, 2, 2, None, None)?;
    let a = Arc::new(AdditivePerm::identity(&t));

    let trace = Arc::new(FieldFn::from_fn(&t, Level::Top, Level::Base, |x| t.relative_trace(x)));
    let report = search_translators(&t, &trace, &a)?;
    println!("trace: {} translators", report.pairs.len());
    for (gamma, b) in &report.pairs {
        println!("  gamma = {gamma:>2}  b = {b}");
    }
    println!("closed under addition: {}, b additive: {}", report.subspace_closed, report.b_additive);

    let mut rng = lintrans::families::seeded(1);
    let random = Arc::new(lintrans::families::random_surjection(&t, &mut rng));
    let report = search_translators(&t, &random, &a)?;
    println!("random surjection: {} translators", report.pairs.len());
    Ok(())
}
