use infolattice::{chowliu_tree, mi_weighted_graph, JointDistribution, Schema, Variable};
use infolattice_cli::docs::{distribution_from_doc, graph_from_doc, parse_document, write_distribution, write_graph, Document};
use infolattice_cli::number::format_f64;
use proptest::prelude::*;

fn dist_strategy() -> impl Strategy<Value = JointDistribution> {
    prop::collection::vec(2usize..=3, 1..=4)
        .prop_flat_map(|cards| {
            let states: usize = cards.iter().product();
            (Just(cards), prop::collection::vec(0.0f64..1.0, states))
        })
        .prop_filter_map("all-zero weights", |(cards, w)| {
            let total: f64 = w.iter().sum();
            (total > 0.0).then(|| {
                let vars = cards.iter().enumerate().map(|(i, &k)| Variable::new(format!("V{i}"), k)).collect();
                let probs = w.iter().map(|x| x / total).collect();
                JointDistribution::new(Schema::new(vars).unwrap(), probs).unwrap()
            })
        })
}

proptest! {
    #[test]
    fn numbers_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let s = format_f64(x);
        let back: f64 = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn distributions_round_trip(d in dist_strategy()) {
        let text = write_distribution(&d, None);
        let Document::Distribution(doc) = parse_document(&text).unwrap() else { panic!("not a distribution") };
        let (back, _) = distribution_from_doc(doc).unwrap();
        prop_assert_eq!(back.schema(), d.schema());
        prop_assert!(back.approx_eq(&d, 1e-15));
        prop_assert_eq!(write_distribution(&back, None), text);
    }

    #[test]
    fn graphs_round_trip(d in dist_strategy()) {
        let g = chowliu_tree(&mi_weighted_graph(&d, 0.0).unwrap()).unwrap();
        let Document::Graph(doc) = parse_document(&write_graph(&g)).unwrap() else { panic!("not a graph") };
        prop_assert_eq!(graph_from_doc(doc).unwrap(), g);
    }
}
