use rispls_web::{alpha_sweep, phase_map, phase_trace, power_sweep, ris_columns};

#[test]
fn trace_is_monotone_per_partition() {
    let t = phase_trace("iterative", 1).unwrap();
    assert_eq!(t.len(), 256);
    for half in t.chunks(128) {
        assert!(half.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn map_has_one_bit_per_element() {
    let m = phase_map("dft", 0).unwrap();
    assert_eq!(m.len(), 256);
    assert_eq!(ris_columns(), 16);
    assert!(m.iter().all(|&b| b <= 1));
    assert!(phase_map("zero", 0).unwrap().iter().all(|&b| b == 0));
}

#[test]
fn alpha_sweep_layout() {
    let v = alpha_sweep("iterative", 0, 11).unwrap();
    assert_eq!(v.len(), 44);
    assert_eq!(v[0], 0.0);
    assert_eq!(v[40], 1.0);
    for row in v.chunks(4) {
        assert!(row[3] >= 0.0 && (row[3] - (row[1] - row[2]).max(0.0)).abs() < 1e-12);
    }
}

#[test]
fn power_sweep_layout() {
    let v = power_sweep("iterative", 9, 0.01, 2.5).unwrap();
    assert_eq!(v.len(), 21 * 6);
    assert_eq!(v[0], -30.0);
    assert_eq!(v[20 * 6], 10.0);
}

#[test]
fn bad_inputs_are_errors() {
    assert!(phase_trace("random", 0).is_err());
    assert!(alpha_sweep("iterative", 0, 1).is_err());
    assert!(power_sweep("iterative", 0, -1.0, 2.5).is_err());
}
