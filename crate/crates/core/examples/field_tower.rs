//! Builds F_9 over F_3 and prints each element with its coefficients,
//! its trace and its image under Frobenius.

use lintrans::FieldTower;

fn main() -> lintrans::Result<()> {
    let t = FieldTower::build(3, 1, 2, None, None)?;
    println!("{} with modulus {:?}", t.describe(), t.modulus_qn());
    let top = t.top();
    for x in top.elements() {
        println!(
            "{x}: coeffs {:?}  Tr = {}  x^3 = {}",
            top.coeffs(x),
            t.relative_trace(x),
            top.frobenius(x, 1)
        );
    }
    let g = top.generator();
    println!("generator {g}, log of 5 = {:?}", top.log(5));

    let t = FieldTower::build(2, 2, 2, None, None)?;
    println!("{}: F_4 modulus {:?}, F_16 modulus {:?}", t.describe(), t.modulus_q(), t.modulus_qn());
    println!("relative trace onto F_4: {:?}", t.relative_trace_table());
    Ok(())
}
