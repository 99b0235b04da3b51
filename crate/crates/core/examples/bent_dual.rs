//! A bent function on F_8 x F_8 from three translators of the trace, its
//! Walsh spectrum, and the predicted dual.

use std::sync::Arc;

use lintrans::bent::build_h;
use lintrans::translators::verify_translator;
use lintrans::{AdditivePerm, FieldFn, FieldTower, LinearMap, Level};

fn main() -> lintrans::Result<()> {
    let t = FieldTower::build(2, 1, 3, None, None)?;
    let f = Arc::new(FieldFn::from_fn(&t, Level::Top, Level::Base, |x| t.relative_trace(x)));
    let a = Arc::new(AdditivePerm::identity(&t));
    let certs = [1, 3, 5].map(|g| verify_translator(&t, &f, g, 1, &a).unwrap().cert().expect("Tr(g) = 1"));
    let g = FieldFn::from_table(&t, Level::Base, Level::Base, vec![1, 0])?;
    let mut inst = build_h(&t, &LinearMap::identity(&t), &certs, &g)?;
    let spectrum = inst.compute_spectrum(&t)?.to_vec();
    let verdict = inst.is_bent()?;
    println!("H   = {}", inst.h.to_hex());
    println!("dual = {}", inst.h_dual.to_hex());
    println!("distinct |W| values: {:?}", spectrum.iter().map(|w| w.abs()).collect::<std::collections::BTreeSet<_>>());
    println!("bent {}, dual matches {}", verdict.bent, verdict.dual_matches);
    lintrans::bent::write_spectrum_csv(&t, &spectrum[..8], std::io::stdout()).ok();
    Ok(())
}
