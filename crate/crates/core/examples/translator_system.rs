//! F(x) = x + g1 h1(f1(x)) + g2 h2(f2(x)) over F_27, and the L-composed
//! variant G = L o F, with both inverses.

use std::sync::Arc;

use lintrans::constructions::{cor35_build, thm33_build, TranslatorSystem};
use lintrans::families::{random_linear_perm, random_rest, seeded, CoordinateFrame};
use lintrans::{AdditivePerm, FieldFn, FieldTower, Level};

fn main() -> lintrans::Result<()> {
    let t = FieldTower::build(3, 1, 3, None, None)?;
    let mut rng = seeded(11);
    let frame = CoordinateFrame::extending(&t, &[4, 10])?;
    let a = Arc::new(AdditivePerm::identity(&t));
    let bs = [1, 2];
    let fs = vec![
        Arc::new(frame.translator_fn(&t, &[bs[0], 0], &a, &random_rest(&t, 1, &mut rng))),
        Arc::new(frame.translator_fn(&t, &[0, bs[1]], &a, &random_rest(&t, 1, &mut rng))),
    ];
    let base = |v: Vec<u32>| FieldFn::from_table(&t, Level::Base, Level::Base, v);
    for hs in [vec![base(vec![1, 1, 1])?, base(vec![0, 0, 2])?], vec![base(vec![0, 1, 2])?, base(vec![2, 1, 0])?]] {
        let sys = TranslatorSystem::diagonal(&t, vec![4, 10], fs.clone(), hs, vec![a.clone(), a.clone()], &bs)?;
        let r = thm33_build(&t, &sys)?;
        println!("F: predicted {}, oracle {}, inverse ok {:?}", r.predicted_permutation, r.oracle_permutation, r.oracle_inverse_ok);
        let l = random_linear_perm(&t, &mut rng);
        let g = cor35_build(&t, &l, &sys)?;
        println!("G: predicted {}, oracle {}, inverse ok {:?}", g.predicted_permutation, g.oracle_permutation, g.oracle_inverse_ok);
        for (name, ok) in &g.cross_checks {
            println!("   {name}: {ok}");
        }
    }
    Ok(())
}
