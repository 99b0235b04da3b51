//! f(x) = Tr(x^(p^s) - a g^(p^s - 1) x) has g as a translator with
//! A(u) = u^(p^s) - a u whenever a is not a (p^s - 1)-th power.

use lintrans::translators::{build_prop24, Prop24Params};
use lintrans::{Error, FieldTower};

fn main() -> lintrans::Result<()> {
    // F_9 over F_3 is too small for s = 1 with k = 1, so use F_81 over F_9.
    let t = FieldTower::build(3, 2, 2, None, None)?;
    for alpha in 1..t.q() {
        match build_prop24(&t, Prop24Params { s: 1, alpha, gamma: 10 }) {
            Ok(inst) => println!(
                "alpha = {alpha}: gamma = {} is a ({}, A)-translator, A = {:?}",
                inst.cert.gamma,
                inst.cert.b,
                inst.a.table()
            ),
            Err(Error::AlphaIsPower(a)) => println!("alpha = {a}: a square, rejected"),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
