// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Sequential against parallel execution for the three parallel stages.

use std::hint::black_box;

use agentcd::bench::{run_bench, BenchInput};
use agentcd::{datasets, explore, sweep, DetectConfig, Execution, ExplorationConfig, Graph, PlantedPartition};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn graphs() -> Vec<(&'static str, Graph)> {
    let planted = PlantedPartition::new(4, 50, 0.3, 0.01).unwrap();
    let mut seed = 0;
    let big = loop {
        let (g, _) = planted.generate(seed);
        if g.is_connected() {
            break g;
        }
        seed += 1;
    };
    vec![("karate", datasets::karate_club().0), ("planted200", big)]
}

fn exploration(c: &mut Criterion) {
    let mut group = c.benchmark_group("explore");
    group.sample_size(10);
    for (name, g) in graphs() {
        for (mode, execution) in MODES {
            let cfg = ExplorationConfig {
                execution,
                ..ExplorationConfig::for_graph(&g, 1)
            };
            group.bench_with_input(BenchmarkId::new(mode, name), &g, |b, g| {
                b.iter(|| explore(black_box(g), &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn sweeping(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    for (name, g) in graphs() {
        let weights = explore(&g, &ExplorationConfig::for_graph(&g, 1)).unwrap().weights;
        for (mode, execution) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, name), &g, |b, g| {
                b.iter(|| sweep(black_box(g), &weights, execution).unwrap())
            });
        }
    }
    group.finish();
}

fn trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("bench_trials");
    group.sample_size(10);
    let (graph, truth) = datasets::karate_club();
    let input = BenchInput::Fixed { graph, truth };
    for (mode, execution) in MODES {
        let cfg = DetectConfig {
            execution,
            ..DetectConfig::with_seed(0)
        };
        group.bench_function(BenchmarkId::new(mode, "karate x8"), |b| {
            b.iter(|| run_bench(black_box(&input), 8, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exploration, sweeping, trials);
criterion_main!(benches);
