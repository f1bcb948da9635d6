use polyg::format::{parse_instance, parse_solution, write_instance, write_solution, SolutionFile};
use polyg_core::{Instance, Objective};
use proptest::prelude::*;

const BOUND: i64 = 1 << 30;

fn instance() -> impl Strategy<Value = Instance> {
    ("[a-z][a-z0-9 _-]{0,12}[a-z0-9]", prop::collection::btree_set((-BOUND..=BOUND, -BOUND..=BOUND), 3..60))
        .prop_map(|(name, set)| Instance::new(name, &set.into_iter().collect::<Vec<_>>()).unwrap())
}

proptest! {
    #[test]
    fn instances_round_trip(inst in instance()) {
        let text = write_instance(&inst);
        let back = parse_instance(&text, "ignored").unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back), text);
    }

    #[test]
    fn plain_lists_match_versioned(inst in instance(), commas in any::<bool>()) {
        let sep = if commas { "," } else { " " };
        let plain: String = inst.points().iter().map(|p| format!("{}{sep}{}\n", p.x, p.y)).collect();
        let back = parse_instance(&plain, &inst.name).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn solutions_round_trip(
        name in "[a-z][a-z0-9-]{0,10}",
        max in any::<bool>(),
        score in any::<f64>().prop_filter("finite", |s| s.is_finite()),
        cycle in prop::collection::vec(any::<u32>(), 0..50),
    ) {
        let sol = SolutionFile {
            instance: name,
            objective: if max { Objective::Max } else { Objective::Min },
            score,
            cycle,
        };
        let text = write_solution(&sol);
        prop_assert_eq!(parse_solution(&text).unwrap(), sol);
    }

    #[test]
    fn parsers_never_panic(text in "\\PC{0,200}") {
        let _ = parse_instance(&text, "x");
        let _ = parse_solution(&text);
    }
}

#[test]
fn out_of_range_coordinates_are_rejected() {
    assert!(parse_instance(&format!("0 0\n1 0\n0 {}\n", BOUND + 1), "x").is_err());
}
