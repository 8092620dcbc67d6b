use std::path::Path;
use std::sync::Arc;

use proptest::prelude::*;

use tilelocal::io::{
    from_json_str, localized_from_file, localized_to_file, pipeline_from_file, pipeline_to_file, to_json_string,
    LocalizedFile, PipelineFile, Spaces,
};
use tilelocal::localize::localize;
use tilelocal::map::{MapPipeline, Stage, TilingMap, Wiggle};
use tilelocal::rational::{q, Rational, Vector};
use tilelocal::section::{build_section, Section, SectionFile};
use tilelocal::system::{chair, period_doubling};
use tilelocal::tiling::{sample_hull, Tiling};
use tilelocal::verify::{random_pipeline, verify_theorem1};

proptest! {
    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, d in 1i64..10_000) {
        let r = q(p, d);
        let back: Rational = from_json_str(&to_json_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn vectors_round_trip(xs in proptest::collection::vec((-500i64..500, 1i64..97), 1..3)) {
        let v = Vector(xs.iter().map(|&(p, d)| q(p, d)).collect());
        let back: Vector = from_json_str(&to_json_string(&v).unwrap()).unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn tilings_round_trip(seed in any::<u64>(), two_d in any::<bool>()) {
        let sys = if two_d { chair() } else { period_doubling() };
        let t = sample_hull(&sys, 1, seed).remove(0);
        let back: Tiling = from_json_str(&to_json_string(&t).unwrap()).unwrap();
        prop_assert_eq!(&back, &t);
    }

    #[test]
    fn pipelines_round_trip(seed in 0u64..400) {
        let sys = Arc::new(period_doubling());
        let (f, _) = random_pipeline(&sys, seed).unwrap();
        let file = pipeline_to_file(&f);
        let parsed: PipelineFile = from_json_str(&to_json_string(&file).unwrap()).unwrap();
        prop_assert_eq!(&parsed, &file);
        let g = pipeline_from_file(&parsed, &Spaces::default()).unwrap();
        prop_assert_eq!(pipeline_to_file(&g), file);
        for t in sample_hull(&sys, 3, seed) {
            let p = t.place(&sys).unwrap();
            prop_assert_eq!(f.apply(&p, &q(2, 1)).unwrap(), g.apply(&p, &q(2, 1)).unwrap());
        }
    }
}

#[test]
fn section_export_round_trips() {
    let sys = Arc::new(period_doubling());
    let sec = build_section(sys.clone(), q(4, 1)).unwrap();
    let file = sec.export();
    let parsed: SectionFile = from_json_str(&to_json_string(&file).unwrap()).unwrap();
    assert_eq!(parsed, file);
    let back = Section::import(sys.clone(), &parsed).unwrap();
    for t in sample_hull(&sys, 50, 3) {
        let p = t.place(&sys).unwrap();
        assert_eq!(back.g_of(&p).unwrap(), sec.g_of(&p).unwrap());
    }
}

#[test]
fn reloaded_localized_map_gives_the_same_report() {
    let sys = Arc::new(period_doubling());
    let f = MapPipeline::single(sys, Stage::Wiggle(Wiggle::geometric_1d(10, q(1, 4), 0)));
    let fe = localize(f, &q(1, 8)).unwrap();
    let text = to_json_string(&localized_to_file(&fe, None)).unwrap();
    let file: LocalizedFile = from_json_str(&text).unwrap();
    let fe2 = localized_from_file(&file, &Spaces::default(), Path::new(".")).unwrap();
    let a = verify_theorem1(&fe, 40, 7).unwrap().stable_json().unwrap();
    let b = verify_theorem1(&fe2, 40, 7).unwrap().stable_json().unwrap();
    assert_eq!(a, b);
}

#[test]
fn bad_rational_in_map_file_is_located() {
    let text = r#"{"source":"period-doubling","target":"period-doubling","stages":[{"kind":"substitute"},{"kind":"translate","v":["1/0"]}]}"#;
    let err = from_json_str::<PipelineFile>(text).unwrap_err();
    assert!(err.to_string().contains("stages[1].v[0]"), "{err}");
}
