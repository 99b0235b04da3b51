//! G(x) = L(x) + L(g) A^-1(h(f(x))) permutes exactly when x + b h(x) does.

use std::sync::Arc;

use lintrans::constructions::thm21_build;
use lintrans::families::{all_base_maps, seeded, random_linear_perm};
use lintrans::translators::verify_translator;
use lintrans::{AdditivePerm, FieldFn, FieldTower, Level};

fn main() -> lintrans::Result<()> {
    let t = FieldTower::build(3, 1, 3, None, None)?;
    let f = Arc::new(FieldFn::from_fn(&t, Level::Top, Level::Base, |x| t.relative_trace(x)));
    let a = Arc::new(AdditivePerm::identity(&t));
    let cert = verify_translator(&t, &f, 1, 0, &a)?.cert();
    println!("gamma = 1 with b = 0: {}", if cert.is_some() { "translator" } else { "refuted" });
    let gamma = 9;
    let b = t.relative_trace(gamma);
    let cert = verify_translator(&t, &f, gamma, b, &a)?.cert().expect("trace translator");
    let l = random_linear_perm(&t, &mut seeded(3));
    for h in all_base_maps(&t, 27)? {
        let r = thm21_build(&t, &l, &cert, &h)?;
        println!(
            "h = {:?}: predicted {:5}  oracle {:5}  {}",
            h.table(),
            r.predicted_permutation,
            r.oracle_permutation,
            r.reason
        );
    }
    Ok(())
}
