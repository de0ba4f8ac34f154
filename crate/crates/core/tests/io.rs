use plap_core::ball::{default_options as ball_options, sup_norm_scan, ScanRow};
use plap_core::io::{
    field_rows, format_float, profile_rows, read_field_csv, read_profile_csv, read_scan_csv,
    write_field_csv, write_profile_csv, write_scan_csv, FieldRow, ProfileRow,
};
use plap_core::strip::{default_options as strip_options, solve_strip, Init, StripGeometry};
use plap_core::{build_profile, catalog, Error, NonlinearitySpec, ProfileKind};
use proptest::prelude::*;

fn logistic() -> NonlinearitySpec {
    NonlinearitySpec::polynomial(&[0.0, 1.0, -1.0], 2.0).unwrap()
}

fn cubic() -> NonlinearitySpec {
    NonlinearitySpec::polynomial(&[0.0, 1.0, 0.0, -1.0], 2.0).unwrap()
}

fn twice<T>(
    rows: &[T],
    write: impl Fn(&mut Vec<u8>, &[T]),
    read: impl Fn(&[u8]) -> Vec<T>,
) -> (Vec<u8>, Vec<u8>) {
    let mut first = Vec::new();
    write(&mut first, rows);
    let back = read(&first);
    let mut second = Vec::new();
    write(&mut second, &back);
    (first, second)
}

#[test]
fn profile_csv_round_trip() {
    let f = cubic();
    let cat = catalog(&f, 2.0).unwrap();
    let entry = cat
        .entries
        .iter()
        .find(|e| e.kind == ProfileKind::Increasing)
        .unwrap();
    let prof = build_profile(&f, 2.0, entry, 8.0, 257).unwrap();
    let rows = profile_rows(&prof);
    let (first, second) = twice(
        &rows,
        |w, r| write_profile_csv(w, r).unwrap(),
        |b| read_profile_csv(b).unwrap(),
    );
    assert_eq!(first, second);
    let text = String::from_utf8(first).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,u,du"));
    let row0: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(row0[0], 0.0);
    assert_eq!(row0[1], 0.0);
    assert!((row0[2] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
    assert_eq!(text.lines().count(), 258);
}

#[test]
fn scan_csv_round_trip() {
    let scan = sup_norm_scan(
        &logistic(),
        2.0,
        2,
        1.0,
        0.5,
        &[2.0, 4.0, 6.0],
        128,
        &ball_options(),
    )
    .unwrap();
    let (first, second) = twice(
        &scan.rows,
        |w, r| write_scan_csv(w, r).unwrap(),
        |b| read_scan_csv(b).unwrap(),
    );
    assert_eq!(first, second);
    assert_eq!(read_scan_csv(first.as_slice()).unwrap(), scan.rows);
    assert!(String::from_utf8(first)
        .unwrap()
        .starts_with("r,J,sup_norm,energy\n"));
}

#[test]
fn field_csv_round_trip() {
    let geom = StripGeometry {
        width: 4.0,
        height: 3.0,
        nx: 33,
        ny: 33,
    };
    let sol = solve_strip(&cubic(), 2.0, 1.0, geom, &Init::Zero, &strip_options()).unwrap();
    let rows = field_rows(&sol);
    assert_eq!(rows.len(), 33 * 33);
    assert_eq!((rows[34].i, rows[34].j), (1, 1));
    let (first, second) = twice(
        &rows,
        |w, r| write_field_csv(w, r).unwrap(),
        |b| read_field_csv(b).unwrap(),
    );
    assert_eq!(first, second);
    let back = read_field_csv(first.as_slice()).unwrap();
    assert!(back.iter().zip(&sol.u).all(|(r, &u)| r.u == u));
}

#[test]
fn malformed_input_is_an_io_error() {
    assert!(matches!(
        read_profile_csv("t,u\n1,2\n".as_bytes()),
        Err(Error::Io(_))
    ));
    assert!(matches!(
        read_profile_csv("t,u,du\n1,2\n".as_bytes()),
        Err(Error::Io(_))
    ));
    assert!(matches!(
        read_scan_csv("r,J,sup_norm,energy\n1,2.5,3,4\n".as_bytes()),
        Err(Error::Io(_))
    ));
}

proptest! {
    #[test]
    fn floats_survive_formatting(bits in any::<u64>()) {
        let v = f64::from_bits(bits);
        prop_assume!(v.is_finite());
        prop_assert_eq!(format_float(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
    }

    #[test]
    fn arbitrary_tables_round_trip(
        values in prop::collection::vec((any::<f64>(), any::<f64>(), any::<f64>()), 0..40),
        j in 128usize..5000,
    ) {
        let clean = |v: f64| if v.is_finite() { v } else { 0.0 };
        let rows: Vec<ProfileRow> = values.iter().map(|&(t, u, du)| ProfileRow { t: clean(t), u: clean(u), du: clean(du) }).collect();
        let (first, second) = twice(&rows, |w, r| write_profile_csv(w, r).unwrap(), |b| read_profile_csv(b).unwrap());
        prop_assert_eq!(first, second);

        let scans: Vec<ScanRow> = values.iter().map(|&(r, s, e)| ScanRow { r: clean(r), intervals: j, sup_norm: clean(s), energy: clean(e) }).collect();
        let (first, second) = twice(&scans, |w, r| write_scan_csv(w, r).unwrap(), |b| read_scan_csv(b).unwrap());
        prop_assert_eq!(first, second);

        let fields: Vec<FieldRow> = values.iter().enumerate().map(|(k, &(x, y, u))| FieldRow { i: k, j, x: clean(x), y: clean(y), u: clean(u) }).collect();
        let (first, second) = twice(&fields, |w, r| write_field_csv(w, r).unwrap(), |b| read_field_csv(b).unwrap());
        prop_assert_eq!(first, second);
    }
}
