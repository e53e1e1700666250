use horolab_projection::*;

#[test]
fn uniform_measure_is_one_dimensional() {
    let n = 1024;
    let s: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect();
    let w = vec![1.0 / n as f64; n];
    let r = interval_regularity(&s, &w, 1.0, 1.0 / 256.0);
    // a scanned interval of length l holds at most l + 1/n of the mass
    assert!(r.constant <= 1.0 + 256.0 / n as f64 + 1e-12, "{}", r.constant);
    assert!(r.constant >= 1.0 - 1e-12);
}

#[test]
fn dirac_blows_up_at_the_floor() {
    let r = interval_regularity(&[0.3], &[1.0], 0.5, 1e-4);
    let shortest = 2f64.powi(-((-(1e-4f64).log2()).floor() as i32));
    assert!((r.constant - shortest.powf(-0.5)).abs() <= 1e-9 * r.constant);
    assert_eq!(r.worst_mass, 1.0);
}

#[test]
fn every_window_is_covered() {
    // brute-force sliding windows never exceed 4^exponent times the scanned constant
    let s: Vec<f64> = (0..200).map(|k| ((k * 37) % 200) as f64 / 173.0 + 0.01 * (k % 3) as f64).collect();
    let w = vec![1.0 / 200.0; 200];
    let e = 0.7;
    let floor = 1.0 / 64.0;
    let r = interval_regularity(&s, &w, e, floor);
    for &a in &s {
        let mut l = floor;
        while l <= 1.5 {
            let m: f64 = s.iter().filter(|&&x| x >= a && x <= a + l).count() as f64 / 200.0;
            assert!(m / l.powf(e) <= 4f64.powf(e) * r.constant * (1.0 + 1e-12));
            l *= 1.3;
        }
    }
}
