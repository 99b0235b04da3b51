//! A permutation of F_16 from a (t, x^2)-linear translator over F_4, with
//! its closed-form inverse checked against the table inverse.

use std::sync::Arc;

use lintrans::constructions::thm31_build;
use lintrans::families::{random_linear_perm, random_rest, seeded, CoordinateFrame};
use lintrans::translators::verify_translator;
use lintrans::{AdditivePerm, FieldFn, FieldTower, Level};

fn main() -> lintrans::Result<()> {
    let t = FieldTower::build(2, 2, 2, None, None)?;
    let mut rng = seeded(7);
    let a = Arc::new(AdditivePerm::frobenius(&t, 1)?);
    let (gamma, b) = (6, 2);
    let frame = CoordinateFrame::extending(&t, &[gamma])?;
    let f = Arc::new(frame.translator_fn(&t, &[b], &a, &random_rest(&t, 1, &mut rng)));
    let cert = verify_translator(&t, &f, gamma, b, &a)?.cert().expect("translator by construction");

    let l = random_linear_perm(&t, &mut rng);
    let g = FieldFn::from_table(&t, Level::Base, Level::Base, vec![1, 3, 0, 2])?;
    let r = thm31_build(&t, &l, &cert, &g)?;
    println!("phi   = {:?}", r.built.table());
    println!("phi^-1 = {:?}", r.predicted_inverse.as_ref().expect("built").table());
    println!("permutation: {}, inverse checks: {:?}", r.oracle_permutation, r.oracle_inverse_ok);
    Ok(())
}
