use graphot::attributes::DtwCost;
use graphot::eval::ari;
use graphot::eval::{monte_carlo, ExperimentConfig};
use graphot::pipeline::{run_method, Method, RunParams};
use graphot::synth::{Structure, SyntheticSpec};
use graphot::synth::Shape;
use graphot::AttributedGraph;

fn spec(level: Option<u8>) -> SyntheticSpec {
    SyntheticSpec {
        sizes: vec![10, 10, 10],
        shape: Shape::Chain,
        b: 0.2,
        t: 20.0,
        level,
        structure: Structure::Graph,
        noise_sigma: None,
    }
}

#[test]
fn generated_graph_round_trips_and_is_clustered() {
    let syn = spec(Some(1)).generate(5).unwrap();
    let graph = syn.graph.clone().unwrap().with_attributes(syn.attributes.clone().unwrap()).unwrap();
    let reloaded = AttributedGraph::from_json(&graph.to_json().unwrap()).unwrap();
    assert_eq!(reloaded.to_json().unwrap(), graph.to_json().unwrap());

    let instance = syn.instance(0.5, DtwCost::Squared).unwrap();
    let params = RunParams::default();
    for label in ["srgw-mean", "srfgw-mean", "embedded-srgw-mean"] {
        let method: Method = label.parse().unwrap();
        let out = run_method(&instance, method, &params, 9).unwrap();
        assert_eq!(out.partition.len(), 30);
        assert!(ari(&out.partition, &syn.truth).unwrap() > 0.9, "{label}");
        assert_eq!(out.partition, run_method(&instance, method, &params, 9).unwrap().partition);
    }
}

#[test]
fn plain_graphs_refuse_fused_methods() {
    let syn = spec(None).generate(1).unwrap();
    let instance = syn.instance(0.5, DtwCost::Squared).unwrap();
    let err = run_method(&instance, "srfgw-mean".parse().unwrap(), &RunParams::default(), 0).unwrap_err();
    assert_eq!(err.kind(), "AttributesRequired");
}

#[test]
fn monte_carlo_is_reproducible() {
    let text = r#"{
        "reps": 3, "sizes": [6, 6], "shapes": ["chain"], "t": [2.0], "b": 0.2,
        "methods": ["frechet-kmeans", "srgw-mean"]
    }"#;
    let cfg: ExperimentConfig = serde_json::from_str(text).unwrap();
    let a = monte_carlo(&cfg, 4).unwrap();
    let b = monte_carlo(&cfg, 4).unwrap();
    assert_eq!(a.len(), 2);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.aris, y.aris);
        assert_eq!(x.aris.len(), 3);
    }
}
