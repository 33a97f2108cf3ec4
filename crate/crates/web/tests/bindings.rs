use nvdamage_web::{map_rows, profile_rows, stopping_rows, MAX_MAP_ROWS};

#[test]
fn profile_matches_ares_exit_energy() {
    let rows = profile_rows(155.0, 1.5e18, 3000.0).unwrap();
    assert_eq!(rows.len(), 3 * 3000);
    let last_energy = rows[rows.len() - 2];
    assert!((last_energy - 149.24).abs() < 0.01, "{last_energy}");
    assert!((rows[2] - 117.38).abs() < 0.01, "entrance ppm {}", rows[2]);
}

#[test]
fn step_is_coarsened_for_thick_slabs() {
    let rows = profile_rows(155.0, 1e18, 1e5).unwrap();
    assert!(rows.len() / 3 <= 20_000);
}

#[test]
fn map_layout_and_symmetry() {
    let v = map_rows(155.0, 1.5e18, 500.0, 3000.0, false, 31).unwrap();
    let (nx, rows) = (v[0] as usize, v[1] as usize);
    assert_eq!(nx, 31);
    assert!(rows <= MAX_MAP_ROWS);
    assert_eq!(v.len(), 2 + nx + rows + nx * rows);
    let values = &v[2 + nx + rows..];
    for r in 0..rows {
        let row = &values[r * nx..(r + 1) * nx];
        for i in 0..nx {
            assert_eq!(row[i], row[nx - 1 - i]);
        }
    }
    assert!((values[nx / 2] - 117.38).abs() < 0.01);
}

#[test]
fn stopping_layout_and_sum() {
    let v = stopping_rows(0.01, 1000.0, 25, true, true).unwrap();
    assert_eq!(v.len(), 100);
    for q in v.chunks(4) {
        assert!((q[1] + q[2] - q[3]).abs() <= 1e-12 * q[3]);
    }
}

#[test]
fn invalid_input_is_an_error() {
    assert!(profile_rows(-1.0, 1e18, 100.0).is_err());
    assert!(map_rows(1.0, 1e18, 100.0, 100.0, false, 30).is_err());
    assert!(stopping_rows(0.001, 1.0, 10, true, true).is_err());
}
