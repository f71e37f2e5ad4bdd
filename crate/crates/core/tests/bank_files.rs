use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qtframe::bankio::{from_text, to_canonical, BankFile, MaskFile, PyramidFile, SignalFile};
use qtframe::fixtures;
use qtframe::qtconstruct::{construct_quasitight, verify_quasitight};
use qtframe::transform::{random_signal, TransformFilters};

#[test]
fn constructed_banks_round_trip_byte_identical() {
    for (name, m) in [("vec-bspline2", 2), ("hermite", 2), ("example61", 2)] {
        let (a, m_dil) = fixtures::fixture(name).unwrap();
        let bank = construct_quasitight(&a, m_dil, Some(m), None).unwrap();
        let text = to_canonical(&BankFile::from_bank(&bank, vec![name.into()])).unwrap();
        let file: BankFile = from_text(&text).unwrap();
        assert_eq!(to_canonical(&file).unwrap(), text, "{name}");
        let back = file.to_bank().unwrap();
        assert_eq!(back, bank, "{name}");
        assert!(verify_quasitight(&back).unwrap().holds(m), "{name}");
    }
}

#[test]
fn fixture_masks_round_trip() {
    for name in ["hermite", "vec-bspline2", "example61", "bspline(3,2)", "vec-bspline(3,2)"] {
        let (a, m_dil) = fixtures::fixture(name).unwrap();
        let text = to_canonical(&MaskFile::new(&a, m_dil, vec![])).unwrap();
        let file: MaskFile = from_text(&text).unwrap();
        assert_eq!(to_canonical(&file).unwrap(), text);
        assert_eq!(file.to_mask().unwrap(), (a, m_dil));
    }
}

#[test]
fn pyramid_and_signal_files_round_trip() {
    let (a, m_dil) = fixtures::fixture("vec-bspline2").unwrap();
    let bank = construct_quasitight(&a, m_dil, Some(2), None).unwrap();
    let f = TransformFilters::from_bank(&bank).unwrap();
    let v = random_signal(&mut ChaCha8Rng::seed_from_u64(3), 2, 40, -5);
    let sig: SignalFile = from_text(&to_canonical(&SignalFile::from_signal(&v)).unwrap()).unwrap();
    assert_eq!(sig.to_signal().unwrap(), v);
    let p = f.analyze(&v, 2).unwrap();
    let text = to_canonical(&PyramidFile::new(&p, m_dil)).unwrap();
    let back: PyramidFile = from_text(&text).unwrap();
    assert_eq!(to_canonical(&back).unwrap(), text);
    let p2 = back.to_pyramid().unwrap();
    assert_eq!(p2, p);
    assert_eq!(f.synthesize(&p2).unwrap(), v);
}
