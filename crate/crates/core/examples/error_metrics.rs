use quantum_forest::forest::PredictionPair;
use quantum_forest::metrics::{error_metric, Metric};

fn main() {
    let pairs: Vec<PredictionPair> = [(12.0, 11.6), (15.5, 15.9), (9.0, 9.0), (20.0, 18.7)]
        .into_iter()
        .map(|(truth, forecast)| PredictionPair { truth, forecast })
        .collect();
    for m in Metric::ALL {
        println!("{:<6} {:.6}", m.name(), error_metric(&pairs, m).unwrap());
    }

    // Percentage metrics are undefined when the truth is zero.
    let zero = [PredictionPair { truth: 0.0, forecast: 1.0 }];
    println!("{}", error_metric(&zero, Metric::Mape).unwrap_err());
}
