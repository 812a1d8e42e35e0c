#include "orqc/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>

#include "orqc/ensemble.hpp"
#include "orqc/errors.hpp"
#include "orqc/magic.hpp"

namespace orqc {

namespace {

constexpr double kRuntimeTraceTol = 1e-9;
constexpr double kRuntimeHermitianTol = 1e-9;
constexpr double kInitialMagicTol = 1e-8;

struct RealizationOutput {
  /// values[series][t]
  std::vector<std::vector<double>> values;
  /// moments[t][k - 1], pooled kdesign only
  std::vector<std::vector<ComplexMatrix>> moments;
  std::optional<KrylovResult> krylov;
};

struct RunContext {
  const ExperimentConfig& cfg;
  Bipartition cut;
  QubitSubset ensemble_a;
  InitialRecipe recipe;
  std::vector<std::string> labels;
};

std::vector<std::string> series_labels(const ExperimentConfig& cfg) {
  switch (cfg.observable) {
    case Observable::LogNeg: return {"logneg"};
    case Observable::MutualInfo: return {"mutual_info"};
    case Observable::Sre: return {"sre"};
    case Observable::Krylov: return {"complexity", "dimension"};
    case Observable::KDesign: {
      std::vector<std::string> out;
      for (int k = 1; k <= cfg.k_max; ++k) out.push_back("delta_k" + std::to_string(k));
      return out;
    }
    case Observable::BipartitionProbe:
      return {kProbeLabels.begin(), kProbeLabels.end()};
  }
  return {};
}

DensityMatrix sample_initial(const RunContext& ctx, RandomStream& stream) {
  const int n = ctx.cfg.circuit.n_system;
  if (ctx.recipe == InitialRecipe::ZeroState) return DensityMatrix::basis_state(n, 0);
  DensityMatrix rho;
  for (int p = 0; p < n / 2; ++p) {
    DensityMatrix pair = ctx.recipe == InitialRecipe::HsPairs
                             ? hs_random_density(2, stream)
                             : magic_free_pair_state(stream, ctx.cfg.initial_weights);
    rho = p == 0 ? std::move(pair) : kron(rho, pair);
  }
  return rho;
}

void check_invariants(const DensityMatrix& rho, int t, std::size_t r) {
  const double tr = rho.trace();
  const double herm = hermiticity_defect(rho.matrix());
  if (std::abs(tr - 1.0) > kRuntimeTraceTol || herm > kRuntimeHermitianTol) {
    throw NumericalError("realization " + std::to_string(r) + ", step " + std::to_string(t) +
                         ": trace deviation " + format_double(std::abs(tr - 1.0)) +
                         ", Hermiticity defect " + format_double(herm));
  }
}

DensityMatrix keep_qubits(const ComplexMatrix& rho, int n_qubits, const std::vector<int>& keep) {
  return DensityMatrix::from_trusted(partial_trace(rho, n_qubits, keep));
}

void record_probe(const DensityMatrix& three, const ExperimentConfig& cfg,
                  RealizationOutput& out) {
  const auto cuts = probe_cuts(three, cfg.negativity);
  for (std::size_t i = 0; i < cuts.size(); ++i) out.values[i].push_back(cuts[i]);
}

void evaluate(const RunContext& ctx, const FullState& state, const DensityMatrix& sys,
              RealizationOutput& out) {
  const ExperimentConfig& cfg = ctx.cfg;
  switch (cfg.observable) {
    case Observable::LogNeg:
      out.values[0].push_back(log_negativity(sys, ctx.cut, cfg.negativity, cfg.log_base));
      break;
    case Observable::MutualInfo:
      out.values[0].push_back(mutual_information(sys, ctx.cut, cfg.log_base));
      break;
    case Observable::Sre:
      out.values[0].push_back(sre2(cfg.joint_state ? state.rho : sys, cfg.log_base).magic);
      break;
    case Observable::KDesign: {
      const ProjectedEnsemble ens = build_projected_ensemble(sys, ctx.ensemble_a);
      std::vector<ComplexMatrix> moments;
      for (int k = 1; k <= cfg.k_max; ++k) {
        ComplexMatrix m = kth_moment(ens, k, std::size_t(-1));
        if (cfg.kdesign_averaging == KDesignAveraging::PooledMoment) {
          out.values[static_cast<std::size_t>(k - 1)].push_back(0.0);
          moments.push_back(std::move(m));
        } else {
          out.values[static_cast<std::size_t>(k - 1)].push_back(
              design_distance(m, ens.dim(), k));
        }
      }
      if (!moments.empty()) out.moments.push_back(std::move(moments));
      break;
    }
    case Observable::BipartitionProbe:
    case Observable::Krylov:
      break;
  }
}

RealizationOutput run_krylov_realization(const RunContext& ctx, std::size_t r) {
  const ExperimentConfig& cfg = ctx.cfg;
  CircuitStreams streams(cfg.master_seed, r);
  RandomStream init(SeedHierarchy{cfg.master_seed, r, StreamLabel::InitialState});
  const DensityMatrix rho0 = sample_initial(ctx, init);
  KrylovOptions opt;
  opt.max_steps = cfg.steps;
  opt.tolerance = cfg.krylov_tolerance;
  opt.stall_window = cfg.krylov_stall_window;
  opt.fixed_steps = cfg.krylov_fixed_steps;
  opt.check_gram = cfg.circuit.n_system <= 4;
  RealizationOutput out;
  try {
    out.krylov = krylov_run(cfg.circuit, rho0, opt, streams);
  } catch (const DegenerateInitialState& e) {
    throw NumericalError("realization " + std::to_string(r) + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw NumericalError("realization " + std::to_string(r) + ": " + e.what());
  }
  out.values.resize(2);
  out.values[0] = out.krylov->complexity;
  for (int k : out.krylov->dimension_history) out.values[1].push_back(k);
  return out;
}

RealizationOutput run_realization(const RunContext& ctx, std::size_t r) {
  const ExperimentConfig& cfg = ctx.cfg;
  if (cfg.observable == Observable::Krylov) return run_krylov_realization(ctx, r);

  CircuitStreams streams(cfg.master_seed, r);
  RandomStream init(SeedHierarchy{cfg.master_seed, r, StreamLabel::InitialState});
  const DensityMatrix rho0 = sample_initial(ctx, init);
  FullState state = make_full_state(cfg.circuit, rho0, streams);

  RealizationOutput out;
  out.values.resize(ctx.labels.size());
  const int n = cfg.circuit.n_system;
  const bool probe = cfg.observable == Observable::BipartitionProbe;
  const bool mlorc_probe = probe && cfg.circuit.circuit == CircuitClass::MLORC;

  auto probe_full = [&] {
    record_probe(keep_qubits(state.rho.matrix(), state.n_qubits(), {0, 1, state.aux_qubit(0)}),
                 cfg, out);
  };

  // t = 0
  if (mlorc_probe) {
    record_probe(kron(keep_qubits(rho0.matrix(), n, {0, 1}), DensityMatrix::basis_state(1, 0)),
                 cfg, out);
  } else if (probe) {
    probe_full();
  } else {
    evaluate(ctx, state, rho0, out);
  }
  if (cfg.observable == Observable::Sre && !cfg.joint_state &&
      ctx.recipe == InitialRecipe::MagicFreePairs &&
      cfg.initial_weights == WeightSampling::Vertex &&
      std::abs(out.values[0][0]) > kInitialMagicTol) {
    throw NumericalError("realization " + std::to_string(r) +
                         ": initial stabilizer Renyi entropy " + format_double(out.values[0][0]) +
                         " is not zero");
  }

  std::optional<DensityMatrix> captured;
  const FreshSlotObserver observer = [&](const ComplexMatrix& ext, const GateSlot& slot) {
    if (slot.pair[0] == 0 || slot.pair[1] == 0) captured = keep_qubits(ext, n + 1, {0, 1, n});
  };

  for (int t = 1; t <= cfg.steps; ++t) {
    if (mlorc_probe) {
      captured.reset();
      mlorc_step(state, cfg.circuit, t, streams, observer);
      if (!captured) throw NumericalError("probe slot carried no auxiliary");
    } else {
      circuit_step(state, cfg.circuit, t, streams);
    }
    const DensityMatrix sys = reduced_system_state(state);
    check_invariants(sys, t, r);
    if (mlorc_probe) {
      record_probe(*captured, cfg, out);
    } else if (probe) {
      probe_full();
    } else {
      evaluate(ctx, state, sys, out);
    }
  }
  return out;
}

std::size_t pow4(int q) { return std::size_t{1} << (2 * q); }

std::size_t realization_bytes(const ExperimentConfig& cfg) {
  const CircuitSpec& c = cfg.circuit;
  const int n = c.n_system;
  const int q = c.circuit == CircuitClass::MLORC ? n + 1 : n + c.n_aux();
  std::size_t bytes = 4 * pow4(q) * sizeof(Complex);
  if (cfg.observable == Observable::Sre) {
    const int w = cfg.joint_state ? n + c.n_aux() : n;
    bytes += 2 * pow4(w) * sizeof(Complex);
  }
  if (cfg.observable == Observable::Krylov) {
    const std::size_t d2 = pow4(n);
    const std::size_t vectors = std::min<std::size_t>(d2 - 1, static_cast<std::size_t>(cfg.steps) + 1);
    bytes += vectors * d2 * sizeof(Complex);
    if (n <= 4) bytes += vectors * vectors * sizeof(Complex);
  }
  if (cfg.observable == Observable::KDesign) {
    const std::size_t da = dim_of(static_cast<int>(cfg.ensemble_part_a().size()));
    std::size_t dk = 1;
    std::size_t per_step = 0;
    for (int k = 1; k <= cfg.k_max; ++k) {
      dk *= da;
      per_step += dk * dk * sizeof(Complex);
    }
    bytes += 4 * per_step;
    if (cfg.kdesign_averaging == KDesignAveraging::PooledMoment) {
      bytes += static_cast<std::size_t>(cfg.steps + 1) * per_step;
    }
  }
  return bytes;
}

MeanVariance aggregate_at(const std::vector<RealizationOutput>& outs, std::size_t series,
                          std::size_t t) {
  Fluctuation f;
  for (const auto& o : outs) f.add(o.values[series][t]);
  return {f.mean(), f.variance()};
}

} // namespace

const NamedSeries& ExperimentResult::find(std::string_view label) const {
  for (const auto& s : series) {
    if (s.label == label) return s;
  }
  throw std::out_of_range("no series labelled '" + std::string(label) + "'");
}

std::array<double, 6> probe_cuts(const DensityMatrix& three, NegativityConvention convention) {
  if (three.n_qubits() != 3) throw std::invalid_argument("probe_cuts expects three qubits");
  std::array<double, 6> out{};
  for (int q = 0; q < 3; ++q) {
    out[static_cast<std::size_t>(q)] =
        log_negativity(three, Bipartition::split(QubitSubset({q}, 3)), convention);
  }
  const std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const DensityMatrix two = partial_trace(three, QubitSubset({pairs[i][0], pairs[i][1]}, 3));
    out[3 + i] = log_negativity(two, Bipartition::split(QubitSubset({0}, 2)), convention);
  }
  return out;
}

double saturation_value(const std::vector<TimeSeriesRecord>& series, double tail_fraction) {
  if (series.empty()) throw std::invalid_argument("saturation_value: empty series");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw std::invalid_argument("tail_fraction must lie in (0, 1]");
  }
  const std::size_t first = series.front().t == 0 && series.size() > 1 ? 1 : 0;
  const std::size_t steps = series.size() - first;
  const auto count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(steps) - 1e-9)));
  double sum = 0.0;
  for (std::size_t i = series.size() - count; i < series.size(); ++i) sum += series[i].mean;
  return sum / static_cast<double>(count);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();

  RunContext ctx{config, {}, config.ensemble_part_a(), config.effective_initial_state(),
                 series_labels(config)};
  if (config.observable == Observable::LogNeg || config.observable == Observable::MutualInfo) {
    ctx.cut = Bipartition::split(config.bipartition_part_a());
  }

  const std::size_t budget = static_cast<std::size_t>(config.memory_budget_mb) << 20;
  const std::size_t per_run = realization_bytes(config);
  if (per_run > budget) {
    throw ResourceError("one realization needs about " + std::to_string(per_run >> 20) +
                        " MiB, above the memory budget of " +
                        std::to_string(config.memory_budget_mb) + " MiB");
  }
  const auto total = static_cast<std::size_t>(config.realizations);
  const int requested = effective_parallel_width(config);
  const std::size_t width = std::max<std::size_t>(
      1, std::min({static_cast<std::size_t>(requested), budget / per_run, total}));

  ExperimentResult result;
  result.manifest.config_json = config_to_json(config);
  result.manifest.master_seed = config.master_seed;
  result.manifest.parallel_width = static_cast<int>(width);
  result.manifest.tail_fraction = config.tail_fraction;
  for (std::size_t r = 0; r < total; ++r) {
    result.manifest.realization_seeds.push_back(
        SeedHierarchy{config.master_seed, r, StreamLabel::Gates}.derived_seed());
  }

  // Realizations run in batches of `width`; everything is reduced in
  // realization order so the output does not depend on the width.
  std::vector<RealizationOutput> kept;
  kept.reserve(total);
  std::vector<std::vector<ComplexMatrix>> pooled;
  for (std::size_t start = 0; start < total; start += width) {
    const std::size_t count = std::min(width, total - start);
    std::vector<RealizationOutput> batch(count);
    std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(count)) if (count > 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      try {
        batch[idx] = run_realization(ctx, start + idx);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (auto& o : batch) {
      if (!o.moments.empty()) {
        if (pooled.empty()) {
          pooled = std::move(o.moments);
        } else {
          for (std::size_t t = 0; t < pooled.size(); ++t) {
            for (std::size_t k = 0; k < pooled[t].size(); ++k) pooled[t][k] += o.moments[t][k];
          }
        }
        o.moments.clear();
      }
      kept.push_back(std::move(o));
    }
  }

  std::size_t length = kept.front().values.front().size();
  for (const auto& o : kept) length = std::min(length, o.values.front().size());

  const int n_real = static_cast<int>(total);
  for (std::size_t s = 0; s < ctx.labels.size(); ++s) {
    NamedSeries ns{ctx.labels[s], {}};
    for (std::size_t t = 0; t < length; ++t) {
      const MeanVariance mv = aggregate_at(kept, s, t);
      ns.records.push_back({static_cast<int>(t), mv.mean, mv.variance, n_real});
    }
    result.series.push_back(std::move(ns));
  }

  if (config.observable == Observable::KDesign) {
    const std::size_t d = dim_of(static_cast<int>(ctx.ensemble_a.size()));
    for (int k = 1; k <= config.k_max; ++k) {
      auto& ns = result.series[static_cast<std::size_t>(k - 1)];
      for (std::size_t t = 0; t < length; ++t) {
        KDesignRow row{static_cast<int>(t), k, 0.0, 0.0, n_real};
        if (config.kdesign_averaging == KDesignAveraging::PooledMoment) {
          const ComplexMatrix avg = pooled[t][static_cast<std::size_t>(k - 1)] / static_cast<double>(total);
          row.delta = design_distance(avg, d, k);
          ns.records[t].mean = row.delta;
          ns.records[t].variance = 0.0;
        } else {
          row.delta = ns.records[t].mean;
          row.standard_error =
              total > 1 ? std::sqrt(ns.records[t].variance / static_cast<double>(total - 1)) : 0.0;
        }
        result.kdesign.push_back(row);
      }
    }
  }

  if (config.observable == Observable::Krylov) {
    KrylovSummary ks;
    for (const auto& o : kept) {
      ks.dimensions.push_back(o.krylov->dimension);
      ks.final_complexity.push_back(o.krylov->complexity.back());
      ks.max_gram_deviation = std::max(ks.max_gram_deviation, o.krylov->gram_deviation);
    }
    for (const auto& rec : result.series[1].records) ks.mean_dimension.push_back(rec.mean);
    result.krylov = std::move(ks);
  }

  for (const auto& s : result.series) {
    result.manifest.saturation.emplace_back(s.label,
                                            saturation_value(s.records, config.tail_fraction));
  }
  result.manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

} // namespace orqc
