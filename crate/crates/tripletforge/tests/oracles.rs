mod common;

use common::oracle::{degenerate_cw_pump, degenerate_pulsed_pump, nondegenerate_cw_pump, OracleCheck};

fn assert_all(checks: Vec<OracleCheck>) {
    for c in &checks {
        eprintln!("{}: rel diff {:.2e}, bound {:.2e}", c.label, c.rel_diff(), c.bound / c.oracle);
    }
    for c in checks {
        assert!(c.passed(), "{}: library {:.9e}, oracle {:.9e}, bound {:.3e}", c.label, c.library, c.oracle, c.bound);
    }
}

#[test]
fn degenerate_cw_pump_integrals() {
    assert_all(degenerate_cw_pump());
}

#[test]
fn nondegenerate_cw_pump_integrals() {
    assert_all(nondegenerate_cw_pump());
}

#[test]
fn degenerate_pulsed_pump_integrals() {
    assert_all(degenerate_pulsed_pump());
}
