//! F(x) = g1 h1(f1(x)) + g2 h2(f2(x)) on F_9 with L = 0 permutes exactly
//! when the matrix of translator constants has full rank.

use std::sync::Arc;

use lintrans::constructions::{thm39_build, TranslatorSystem};
use lintrans::families::CoordinateFrame;
use lintrans::{AdditivePerm, FieldFn, FieldTower, LinearMap, Level};

fn main() -> lintrans::Result<()> {
    let t = FieldTower::build(3, 1, 2, None, None)?;
    let frame = CoordinateFrame::from_basis(&t, vec![1, 3]);
    let a = Arc::new(AdditivePerm::identity(&t));
    let h = FieldFn::from_table(&t, Level::Base, Level::Base, vec![2, 0, 1])?;
    let zero = LinearMap::zero(&t);
    for b in [vec![vec![1, 0], vec![0, 2]], vec![vec![1, 2], vec![2, 1]], vec![vec![1, 1], vec![1, 2]]] {
        let fs = (0..2)
            .map(|j| Arc::new(frame.translator_fn(&t, &[b[0][j], b[1][j]], &a, &[0])))
            .collect();
        let sys = TranslatorSystem::new(&t, vec![1, 3], fs, vec![h.clone(), h.clone()], vec![a.clone(); 2], b.clone())?;
        let r = thm39_build(&t, &zero, &sys, 0)?;
        println!("B = {b:?}: rank {:?}, predicted {}, oracle {}", r.rank, r.predicted_permutation, r.oracle_permutation);
    }
    Ok(())
}
