//! F(x) = x + x^3 + t h(Tr(t x)) over F_9 for every permutation h of F_3,
//! and a random kernel construction over F_625.

use std::sync::Arc;

use lintrans::constructions::{cor38_build, thm37_build, TranslatorSystem};
use lintrans::families::{base_permutations, random_base_perm, random_kernel_setting, random_rest, seeded};
use lintrans::translators::verify_translator;
use lintrans::{AdditivePerm, FieldFn, FieldTower, Level};

fn main() -> lintrans::Result<()> {
    let t = FieldTower::build(3, 1, 2, None, None)?;
    let top = t.top();
    let gamma = 3;
    let f = Arc::new(FieldFn::from_fn(&t, Level::Top, Level::Base, |x| t.relative_trace(top.mul(gamma, x))));
    let a = Arc::new(AdditivePerm::identity(&t));
    let cert = verify_translator(&t, &f, gamma, 1, &a)?.cert().expect("Tr(t^2) = 1");
    for h in base_permutations(&t, 6)? {
        let r = cor38_build(&t, &cert, &h)?;
        println!("h = {:?}: F = {:?} permutes: {}", h.table(), r.built.table(), r.oracle_permutation);
    }

    let t = FieldTower::build(5, 2, 2, None, None)?;
    let mut rng = seeded(5);
    let ks = random_kernel_setting(&t, 1, &mut rng);
    let a = Arc::new(AdditivePerm::identity(&t));
    let f = Arc::new(ks.frame.translator_fn(&t, &[7], &a, &random_rest(&t, 1, &mut rng)));
    let sys = TranslatorSystem::diagonal(&t, ks.gammas(1).to_vec(), vec![f], vec![random_base_perm(&t, &mut rng)], vec![a], &[7])?;
    let r = thm37_build(&t, &ks.l, &sys)?;
    println!("{}: kernel construction permutes: {}", t.describe(), r.oracle_permutation);
    Ok(())
}
