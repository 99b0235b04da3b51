//! With every b_i = 0 in characteristic 2, F(x) = x + Tr(x) is an
//! involution of F_4, and so is L o F for the commuting involution L = x^2.

use std::sync::Arc;

use lintrans::constructions::{cor34_check, cor36_check, TranslatorSystem};
use lintrans::{AdditivePerm, FieldFn, FieldTower, LinearMap, Level};

fn main() -> lintrans::Result<()> {
    let t = FieldTower::build(2, 1, 2, None, None)?;
    let f = Arc::new(FieldFn::from_fn(&t, Level::Top, Level::Base, |x| t.relative_trace(x)));
    let a = Arc::new(AdditivePerm::identity(&t));
    let h = FieldFn::identity(&t, Level::Base);
    let sys = TranslatorSystem::diagonal(&t, vec![1], vec![f], vec![h], vec![a], &[0])?;
    let r = cor34_check(&t, &sys)?;
    println!("F = {:?}, involution {:?}", r.built.table(), r.involution);

    let l = LinearMap::from_qpoly(&t, &[0, 1])?;
    let rep = cor36_check(&t, &l, &sys)?;
    println!("G = {:?}, involution {}, L fixes gamma {}", rep.result.built.table(), rep.g_involution, rep.l_fixes_gammas);
    Ok(())
}
