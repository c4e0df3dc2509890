#include "qchaos/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qchaos/coherence.hpp"
#include "qchaos/linalg.hpp"
#include "qchaos/majorization.hpp"
#include "qchaos/rmt.hpp"
#include "qchaos/rng.hpp"
#include "qchaos/scrambling.hpp"
#include "qchaos/version.hpp"

namespace qchaos {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// CSV sink with a mandatory header row, '\n' line endings, and 17
/// significant digits for doubles (byte-stable across runs).
class CsvWriter {
 public:
  CsvWriter(const fs::path& dir, std::string name,
            const std::vector<std::string>& header)
      : name_(std::move(name)), out_(dir / name_, std::ios::binary) {
    if (!out_)
      throw Error("cannot open output file " + (dir / name_).string());
    write_row(header);
  }

  void row(const std::vector<std::string>& cells) {
    write_row(cells);
    ++rows_;
  }

  OutputFile close() {
    out_.close();
    if (!out_) throw Error("failed writing output file " + name_);
    return {name_, rows_};
  }

 private:
  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::string name_;
  std::ofstream out_;
  long rows_ = 0;
};

struct FieldReader {
  const json& root;
  std::vector<ValidationIssue>& issues;

  void fail(const std::string& field, const std::string& message) {
    issues.push_back({field, message});
  }

  bool read_int(const json& obj, const std::string& field, int& out,
                bool required, const std::string& prefix) {
    if (!obj.contains(field)) {
      if (required) fail(prefix + field, "required integer field");
      return false;
    }
    if (!obj[field].is_number_integer()) {
      fail(prefix + field, "must be an integer");
      return false;
    }
    out = obj[field].get<int>();
    return true;
  }

  bool read_double(const json& obj, const std::string& field, double& out,
                   bool required, const std::string& prefix) {
    if (!obj.contains(field)) {
      if (required) fail(prefix + field, "required numeric field");
      return false;
    }
    if (!obj[field].is_number()) {
      fail(prefix + field, "must be a number");
      return false;
    }
    out = obj[field].get<double>();
    return true;
  }

  bool read_string(const json& obj, const std::string& field, std::string& out,
                   bool required, const std::string& prefix) {
    if (!obj.contains(field)) {
      if (required) fail(prefix + field, "required string field");
      return false;
    }
    if (!obj[field].is_string()) {
      fail(prefix + field, "must be a string");
      return false;
    }
    out = obj[field].get<std::string>();
    return true;
  }
};

std::optional<XxzDefectParams> parse_xxz_model(FieldReader& r, const json& root) {
  if (!root.contains("model") || !root["model"].is_object()) {
    r.fail("model", "required object with type \"xxz_defect\"");
    return std::nullopt;
  }
  const json& m = root["model"];
  std::string type;
  if (r.read_string(m, "type", type, true, "model.") && type != "xxz_defect")
    r.fail("model.type", "this experiment requires an xxz_defect model");
  XxzDefectParams p;
  if (r.read_int(m, "L", p.L, true, "model.")) {
    if (p.L < 2 || p.L > 24) r.fail("model.L", "chain length must be in [2, 24]");
  }
  if (!r.read_int(m, "n_up", p.n_up, false, "model."))
    p.n_up = p.L / 3;  // paper's filling
  if (p.n_up < 0 || p.n_up > p.L)
    r.fail("model.n_up", "magnetization must be in [0, L]");
  if (r.read_int(m, "delta", p.delta, true, "model.") &&
      (p.delta < 1 || p.delta > p.L))
    r.fail("model.delta", "defect site out of range");
  r.read_double(m, "omega", p.omega, false, "model.");
  r.read_double(m, "epsilon_delta", p.epsilon_delta, false, "model.");
  r.read_double(m, "j_xy", p.j_xy, false, "model.");
  r.read_double(m, "j_z", p.j_z, false, "model.");
  return p;
}

std::optional<TfimParams> parse_tfim_model(FieldReader& r, const json& root) {
  if (!root.contains("model") || !root["model"].is_object()) {
    r.fail("model", "required object with type \"tfim\"");
    return std::nullopt;
  }
  const json& m = root["model"];
  std::string type;
  if (r.read_string(m, "type", type, true, "model.") && type != "tfim")
    r.fail("model.type", "this experiment requires a tfim model");
  TfimParams p;
  if (r.read_int(m, "L", p.L, true, "model.") && (p.L < 2 || p.L > 14))
    r.fail("model.L", "chain length must be in [2, 14]");
  r.read_double(m, "g", p.g, false, "model.");
  r.read_double(m, "h", p.h, false, "model.");
  return p;
}

void parse_basis(FieldReader& r, const json& root, BasisChoice& out) {
  if (!root.contains("basis")) return;  // keep the default
  const json& b = root["basis"];
  if (b.is_string()) {
    const std::string name = b.get<std::string>();
    if (name == "site")
      out.kind = BasisChoice::Kind::site;
    else if (name == "mean_field")
      out.kind = BasisChoice::Kind::mean_field;
    else if (name == "computational")
      out.kind = BasisChoice::Kind::computational;
    else
      r.fail("basis",
             "must be \"site\", \"mean_field\", \"computational\", or an "
             "object {\"file\": path}");
    return;
  }
  if (b.is_object() && b.contains("file") && b["file"].is_string()) {
    out.kind = BasisChoice::Kind::custom_file;
    out.file = b["file"].get<std::string>();
    return;
  }
  r.fail("basis",
         "must be \"site\", \"mean_field\", \"computational\", or an object "
         "{\"file\": path}");
}

void parse_time(FieldReader& r, const json& root, std::optional<TimeBlock>& out) {
  if (!root.contains("time") || !root["time"].is_object()) {
    r.fail("time", "required object with t_max and dt");
    return;
  }
  const json& t = root["time"];
  TimeBlock tb;
  r.read_double(t, "t_max", tb.t_max, true, "time.");
  r.read_double(t, "dt", tb.dt, true, "time.");
  if (!std::isfinite(tb.t_max) || !(tb.t_max > 0.0))
    r.fail("time.t_max", "must be a positive finite number");
  else if (!std::isfinite(tb.dt) || !(tb.dt > 0.0) || tb.dt > tb.t_max)
    r.fail("time.dt", "must satisfy 0 < dt <= t_max");
  else
    out = tb;
}

void parse_ensemble(FieldReader& r, const json& root,
                    std::optional<EnsembleBlock>& out) {
  if (!root.contains("ensemble") || !root["ensemble"].is_object()) {
    r.fail("ensemble", "required object with kind, dimension, samples, seed");
    return;
  }
  const json& e = root["ensemble"];
  EnsembleBlock eb;
  std::string kind;
  if (r.read_string(e, "kind", kind, true, "ensemble.")) {
    if (kind == "GOE")
      eb.kind = EnsembleKind::GOE;
    else if (kind == "GUE")
      eb.kind = EnsembleKind::GUE;
    else if (kind == "Haar")
      eb.kind = EnsembleKind::Haar;
    else if (kind == "DiagonalPhases")
      eb.kind = EnsembleKind::DiagonalPhases;
    else
      r.fail("ensemble.kind",
             "must be one of GOE, GUE, Haar, DiagonalPhases");
  }
  if (r.read_int(e, "dimension", eb.dimension, true, "ensemble.") &&
      eb.dimension < 2)
    r.fail("ensemble.dimension", "must be >= 2");
  int samples = 0;
  if (r.read_int(e, "samples", samples, true, "ensemble.")) {
    if (samples < 1)
      r.fail("ensemble.samples", "must be >= 1");
    else
      eb.samples = samples;
  }
  if (!e.contains("seed")) {
    // Sampling without a pinned seed would break byte determinism.
    r.fail("ensemble.seed", "seed is mandatory whenever sampling occurs");
  } else if (!e["seed"].is_number_integer() ||
             (e["seed"].is_number_integer() && !e["seed"].is_number_unsigned() &&
              e["seed"].get<long long>() < 0)) {
    r.fail("ensemble.seed", "must be a nonnegative integer");
  } else {
    eb.seed = e["seed"].get<std::uint64_t>();
  }
  out = eb;
}

void check_known_keys(FieldReader& r, const json& root,
                      std::vector<std::string> allowed,
                      const std::string& kind_name) {
  allowed.push_back("experiment");
  allowed.push_back("output");
  for (const auto& item : root.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      r.fail(item.key(), "unknown field for experiment '" + kind_name + "'");
  }
}

OrthonormalBasis load_basis_file(const std::string& path, Eigen::Index d) {
  std::ifstream in(path);
  if (!in) throw ValidationError("basis file not readable: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("basis file " + path + ": " + e.what());
  }
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != d)
    throw ValidationError("basis file " + path + ": expected " +
                          std::to_string(d) + " columns");
  Matrix m(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const json& c = j[static_cast<std::size_t>(col)];
    if (!c.is_array() || static_cast<Eigen::Index>(c.size()) != d)
      throw ValidationError("basis file " + path + ": column " +
                            std::to_string(col) + " must hold " +
                            std::to_string(d) + " entries");
    for (Eigen::Index rw = 0; rw < d; ++rw) {
      const json& e = c[static_cast<std::size_t>(rw)];
      if (e.is_number()) {
        m(rw, col) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() &&
                 e[1].is_number()) {
        m(rw, col) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ValidationError("basis file " + path +
                              ": entries must be numbers or [re, im] pairs");
      }
    }
  }
  return OrthonormalBasis(UnitaryOperator(std::move(m)));
}

OrthonormalBasis resolve_basis(const ExperimentConfig& cfg, Eigen::Index d) {
  switch (cfg.basis.kind) {
    case BasisChoice::Kind::site:
    case BasisChoice::Kind::computational:
      return OrthonormalBasis::computational(d);
    case BasisChoice::Kind::mean_field: {
      MeanFieldBasis mf = mean_field_basis(*cfg.xxz);
      if (mf.basis.dim() != d)
        throw DimensionError("mean-field basis dimension mismatch");
      return mf.basis;
    }
    case BasisChoice::Kind::custom_file:
      return load_basis_file(cfg.basis.file, d);
  }
  throw Error("unreachable basis kind");
}

std::vector<OutputFile> run_spectrum(const ExperimentConfig& cfg,
                                     const fs::path& dir) {
  std::vector<OutputFile> outputs;
  const SpectralDecomposition spec = eigh(build_xxz_defect(*cfg.xxz));
  CsvWriter levels(dir, "spectrum.csv", {"index", "energy"});
  for (Eigen::Index j = 0; j < spec.dim(); ++j)
    levels.row({std::to_string(j), fmt_double(spec.eigenvalues[j])});
  outputs.push_back(levels.close());

  if (spec.dim() >= 50) {
    const SpacingStatistics st = spacing_statistics(spec);
    CsvWriter hist(dir, "spacing_histogram.csv",
                   {"bin_lo", "bin_hi", "density"});
    for (std::size_t b = 0; b + 1 < st.bin_edges.size(); ++b)
      hist.row({fmt_double(st.bin_edges[b]), fmt_double(st.bin_edges[b + 1]),
                fmt_double(st.densities[b])});
    outputs.push_back(hist.close());
    CsvWriter ratios(dir, "gap_ratios.csv", {"index", "ratio"});
    for (std::size_t i = 0; i < st.gap_ratios.size(); ++i)
      ratios.row({std::to_string(i), fmt_double(st.gap_ratios[i])});
    outputs.push_back(ratios.close());
  }
  return outputs;
}

std::vector<OutputFile> run_eigencoherence(const ExperimentConfig& cfg,
                                           const fs::path& dir) {
  const SpectralDecomposition spec = eigh(build_xxz_defect(*cfg.xxz));
  const OrthonormalBasis basis = resolve_basis(cfg, spec.dim());
  const std::vector<CoherenceReport> reports =
      eigenstate_coherence_scan(spec, basis);
  CsvWriter out(dir, "eigencoherence.csv",
                {"index", "energy", "c2", "c_rel", "c_l1", "pr2",
                 "normalized_c2", "normalized_c_rel"});
  for (const CoherenceReport& rep : reports)
    out.row({std::to_string(rep.index), fmt_double(rep.energy),
             fmt_double(rep.c2), fmt_double(rep.c_rel), fmt_double(rep.c_l1),
             fmt_double(rep.pr2), fmt_double(rep.normalized_c2),
             fmt_double(rep.normalized_c_rel)});
  return {out.close()};
}

std::vector<OutputFile> run_majorization(const ExperimentConfig& cfg,
                                         const fs::path& dir) {
  XxzDefectParams integrable = *cfg.xxz;
  integrable.delta = *cfg.delta_integrable;
  XxzDefectParams chaotic = *cfg.xxz;
  chaotic.delta = *cfg.delta_chaotic;
  const SpectralDecomposition spec_int = eigh(build_xxz_defect(integrable));
  const SpectralDecomposition spec_cha = eigh(build_xxz_defect(chaotic));
  const OrthonormalBasis basis = resolve_basis(cfg, spec_int.dim());
  CsvWriter out(dir, "majorization.csv", {"window", "fraction"});
  for (double w : cfg.windows)
    out.row({fmt_double(w),
             fmt_double(eigenstate_majorization_fraction(spec_int, spec_cha,
                                                         basis, w))});
  return {out.close()};
}

std::vector<OutputFile> run_dynamics(const ExperimentConfig& cfg,
                                     const fs::path& dir) {
  const TfimParams& p = *cfg.tfim;
  const int w_site = cfg.w_site == -1 ? p.L : cfg.w_site;
  const SpectralDecomposition spec = eigh(build_tfim(p));
  const UnitaryEigensystem v_sys = UnitaryEigensystem::diagonal(
      sigma_z_site_diagonal(p.L, cfg.v_site).cast<Complex>());
  const UnitaryEigensystem w_sys = UnitaryEigensystem::diagonal(
      sigma_z_site_diagonal(p.L, w_site).cast<Complex>());
  const std::vector<double> times = cfg.time->grid().linspace();
  const OtocCgpSeries series = otoc_cgp_series(v_sys, w_sys, spec, times);
  CsvWriter out(dir, "dynamics.csv", {"t", "otoc", "cgp_part", "offdiag_part"});
  for (std::size_t i = 0; i < series.times.size(); ++i)
    out.row({fmt_double(series.times[i]), fmt_double(series.total[i]),
             fmt_double(series.cgp_part[i]),
             fmt_double(series.offdiag_part[i])});
  return {out.close()};
}

std::vector<OutputFile> run_rmt(const ExperimentConfig& cfg,
                                const fs::path& dir) {
  const EnsembleSpec ens = cfg.ensemble->spec();
  const TimeGrid grid = cfg.time->grid();
  if (cfg.task == "sff") {
    const SffEstimate est = sff_r4(ens, grid);
    CsvWriter out(dir, "sff.csv", {"t", "r4", "stderr"});
    for (std::size_t i = 0; i < est.times.size(); ++i)
      out.row({fmt_double(est.times[i]), fmt_double(est.r4_values[i]),
               fmt_double(est.standard_errors[i])});
    return {out.close()};
  }
  const std::vector<CgpBoundRow> rows = gue_cgp_bound_check(
      ens, OrthonormalBasis::computational(ens.dimension), grid);
  CsvWriter out(dir, "cgp_bound.csv",
                {"t", "lhs_mean", "lhs_stderr", "rhs", "rhs_stderr", "gap",
                 "holds", "diag_discrepancy"});
  for (const CgpBoundRow& row : rows)
    out.row({fmt_double(row.t), fmt_double(row.lhs_mean),
             fmt_double(row.lhs_stderr), fmt_double(row.rhs),
             fmt_double(row.rhs_stderr), fmt_double(row.gap),
             row.holds ? "1" : "0", fmt_double(row.diag_discrepancy)});
  return {out.close()};
}

std::vector<OutputFile> run_shorttime(const ExperimentConfig& cfg,
                                      const fs::path& dir) {
  if (cfg.task == "curvature") {
    const EnsembleBlock& ens = *cfg.ensemble;
    const OrthonormalBasis basis =
        OrthonormalBasis::computational(ens.dimension);
    CsvWriter out(dir, "curvature.csv",
                  {"instance", "analytic", "finite_difference", "kappa",
                   "q_bound"});
    for (long i = 0; i < ens.samples; ++i) {
      RandomStream rng =
          RandomStream::for_sample(ens.seed, static_cast<std::uint64_t>(i));
      const HermitianOperator h = ens.kind == EnsembleKind::GOE
                                      ? sample_goe(ens.dimension, rng)
                                      : sample_gue(ens.dimension, rng);
      const CurvatureReport rep = short_time_cgp_curvature(h, basis);
      out.row({std::to_string(i), fmt_double(rep.analytic),
               fmt_double(rep.finite_difference),
               rep.kappa ? fmt_double(*rep.kappa) : "nan",
               fmt_double(rep.q_bound)});
    }
    return {out.close()};
  }
  const std::vector<KlocalScanRow> rows =
      klocal_short_time_scan(cfg.l_range, cfg.k);
  CsvWriter out(dir, "klocal.csv",
                {"L", "k", "trace_h2", "finite_difference", "normalized"});
  for (const KlocalScanRow& row : rows)
    out.row({std::to_string(row.L), std::to_string(row.k),
             fmt_double(row.trace_h2), fmt_double(row.finite_difference),
             fmt_double(row.normalized)});
  return {out.close()};
}

}  // namespace

const char* experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::spectrum: return "spectrum";
    case ExperimentKind::eigencoherence: return "eigencoherence";
    case ExperimentKind::majorization: return "majorization";
    case ExperimentKind::dynamics: return "dynamics";
    case ExperimentKind::rmt: return "rmt";
    case ExperimentKind::shorttime: return "shorttime";
  }
  throw Error("unreachable experiment kind");
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "spectrum", "eigencoherence", "majorization",
      "dynamics", "rmt",            "shorttime"};
  return names;
}

int TimeBlock::num_points() const {
  if (!(dt > 0.0) || !(t_max >= dt))
    throw ValidationError("TimeBlock: need 0 < dt <= t_max");
  return static_cast<int>(std::lround(t_max / dt)) + 1;
}

TimeGrid TimeBlock::grid() const { return {0.0, t_max, num_points()}; }

ValidationResult validate(const std::string& config_text) {
  ValidationResult result;
  json root;
  try {
    root = json::parse(config_text);
  } catch (const json::parse_error& e) {
    result.issues.push_back({"", std::string("parse error: ") + e.what()});
    return result;
  }
  if (!root.is_object()) {
    result.issues.push_back({"", "config must be a JSON object"});
    return result;
  }

  ExperimentConfig cfg;
  cfg.source_text = config_text;
  FieldReader r{root, result.issues};

  std::string kind_name;
  bool kind_known = false;
  if (r.read_string(root, "experiment", kind_name, true, "")) {
    const auto& names = experiment_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == kind_name) {
        cfg.experiment = static_cast<ExperimentKind>(i);
        kind_known = true;
      }
    }
    if (!kind_known) {
      std::string valid;
      for (const std::string& n : names) {
        if (!valid.empty()) valid += ", ";
        valid += n;
      }
      r.fail("experiment",
             "unknown experiment '" + kind_name + "'; valid kinds: " + valid);
    }
  }

  if (root.contains("output")) {
    if (!root["output"].is_object()) {
      r.fail("output", "must be an object");
    } else {
      const json& o = root["output"];
      r.read_string(o, "directory", cfg.output.directory, false, "output.");
      r.read_string(o, "format", cfg.output.format, false, "output.");
      if (cfg.output.format != "csv")
        r.fail("output.format", "only \"csv\" is supported");
    }
  }

  if (kind_known) {
    switch (cfg.experiment) {
      case ExperimentKind::spectrum:
        check_known_keys(r, root, {"model"}, kind_name);
        cfg.xxz = parse_xxz_model(r, root);
        break;
      case ExperimentKind::eigencoherence:
        check_known_keys(r, root, {"model", "basis"}, kind_name);
        cfg.xxz = parse_xxz_model(r, root);
        parse_basis(r, root, cfg.basis);
        break;
      case ExperimentKind::majorization: {
        check_known_keys(
            r, root,
            {"model", "basis", "delta_integrable", "delta_chaotic", "windows"},
            kind_name);
        cfg.xxz = parse_xxz_model(r, root);
        parse_basis(r, root, cfg.basis);
        if (cfg.basis.kind == BasisChoice::Kind::mean_field)
          r.fail("basis",
                 "mean_field is ambiguous for a model pair; use site, "
                 "computational, or a custom file");
        int di = 0, dc = 0;
        const int L = cfg.xxz ? cfg.xxz->L : 0;
        if (r.read_int(root, "delta_integrable", di, true, "")) {
          if (L > 0 && (di < 1 || di > L))
            r.fail("delta_integrable", "defect site out of range");
          else
            cfg.delta_integrable = di;
        }
        if (r.read_int(root, "delta_chaotic", dc, true, "")) {
          if (L > 0 && (dc < 1 || dc > L))
            r.fail("delta_chaotic", "defect site out of range");
          else
            cfg.delta_chaotic = dc;
        }
        if (root.contains("windows")) {
          if (!root["windows"].is_array() || root["windows"].empty()) {
            r.fail("windows", "must be a nonempty array of fractions");
          } else {
            cfg.windows.clear();
            for (std::size_t i = 0; i < root["windows"].size(); ++i) {
              const json& w = root["windows"][i];
              if (!w.is_number() || !(w.get<double>() > 0.0) ||
                  w.get<double>() > 1.0)
                r.fail("windows[" + std::to_string(i) + "]",
                       "must be a fraction in (0, 1]");
              else
                cfg.windows.push_back(w.get<double>());
            }
          }
        }
        break;
      }
      case ExperimentKind::dynamics: {
        check_known_keys(r, root, {"model", "sites", "time"}, kind_name);
        cfg.tfim = parse_tfim_model(r, root);
        if (root.contains("sites")) {
          if (!root["sites"].is_object()) {
            r.fail("sites", "must be an object {\"v\": site, \"w\": site}");
          } else {
            r.read_int(root["sites"], "v", cfg.v_site, false, "sites.");
            r.read_int(root["sites"], "w", cfg.w_site, false, "sites.");
          }
        }
        if (cfg.tfim) {
          const int L = cfg.tfim->L;
          if (cfg.v_site < 1 || cfg.v_site > L)
            r.fail("sites.v", "site out of range [1, L]");
          if (cfg.w_site != -1 && (cfg.w_site < 1 || cfg.w_site > L))
            r.fail("sites.w", "site out of range [1, L] (or -1 for the last)");
        }
        parse_time(r, root, cfg.time);
        break;
      }
      case ExperimentKind::rmt: {
        check_known_keys(r, root, {"task", "ensemble", "time"}, kind_name);
        if (r.read_string(root, "task", cfg.task, true, "") &&
            cfg.task != "sff" && cfg.task != "cgp_bound")
          r.fail("task", "must be \"sff\" or \"cgp_bound\"");
        parse_ensemble(r, root, cfg.ensemble);
        if (cfg.ensemble) {
          if (cfg.task == "cgp_bound" &&
              cfg.ensemble->kind != EnsembleKind::GUE)
            r.fail("ensemble.kind", "cgp_bound requires a GUE ensemble");
          if (cfg.task == "sff" && cfg.ensemble->kind != EnsembleKind::GOE &&
              cfg.ensemble->kind != EnsembleKind::GUE)
            r.fail("ensemble.kind", "sff requires a GOE or GUE ensemble");
        }
        parse_time(r, root, cfg.time);
        break;
      }
      case ExperimentKind::shorttime: {
        if (r.read_string(root, "task", cfg.task, true, "") &&
            cfg.task != "curvature" && cfg.task != "klocal")
          r.fail("task", "must be \"curvature\" or \"klocal\"");
        if (cfg.task == "klocal") {
          check_known_keys(r, root, {"task", "l_range", "k"}, kind_name);
          if (!root.contains("l_range") || !root["l_range"].is_array() ||
              root["l_range"].empty()) {
            r.fail("l_range", "required nonempty array of chain lengths");
          } else {
            for (std::size_t i = 0; i < root["l_range"].size(); ++i) {
              const json& L = root["l_range"][i];
              if (!L.is_number_integer() || L.get<int>() < 1 ||
                  L.get<int>() > 14)
                r.fail("l_range[" + std::to_string(i) + "]",
                       "chain length must be an integer in [1, 14]");
              else
                cfg.l_range.push_back(L.get<int>());
            }
          }
          if (r.read_int(root, "k", cfg.k, true, "") && !cfg.l_range.empty()) {
            const int l_min =
                *std::min_element(cfg.l_range.begin(), cfg.l_range.end());
            if (cfg.k < 1 || cfg.k > l_min)
              r.fail("k", "locality must be in [1, min(l_range)]");
          }
        } else {
          check_known_keys(r, root, {"task", "ensemble"}, kind_name);
          parse_ensemble(r, root, cfg.ensemble);
          if (cfg.ensemble && cfg.ensemble->kind != EnsembleKind::GOE &&
              cfg.ensemble->kind != EnsembleKind::GUE)
            r.fail("ensemble.kind",
                   "curvature requires a GOE or GUE ensemble");
        }
        break;
      }
    }
  }

  if (result.issues.empty()) result.config = std::move(cfg);
  return result;
}

std::string serialize(const ExperimentConfig& config) {
  json j;
  j["experiment"] = experiment_name(config.experiment);
  if (config.xxz) {
    const XxzDefectParams& p = *config.xxz;
    j["model"] = {{"type", "xxz_defect"}, {"L", p.L},
                  {"n_up", p.n_up},       {"delta", p.delta},
                  {"omega", p.omega},     {"epsilon_delta", p.epsilon_delta},
                  {"j_xy", p.j_xy},       {"j_z", p.j_z}};
  }
  if (config.tfim) {
    const TfimParams& p = *config.tfim;
    j["model"] = {{"type", "tfim"}, {"L", p.L}, {"g", p.g}, {"h", p.h}};
  }
  const bool uses_basis =
      config.experiment == ExperimentKind::eigencoherence ||
      config.experiment == ExperimentKind::majorization;
  if (uses_basis) {
    switch (config.basis.kind) {
      case BasisChoice::Kind::site: j["basis"] = "site"; break;
      case BasisChoice::Kind::mean_field: j["basis"] = "mean_field"; break;
      case BasisChoice::Kind::computational:
        j["basis"] = "computational";
        break;
      case BasisChoice::Kind::custom_file:
        j["basis"] = {{"file", config.basis.file}};
        break;
    }
  }
  if (config.experiment == ExperimentKind::majorization) {
    if (config.delta_integrable) j["delta_integrable"] = *config.delta_integrable;
    if (config.delta_chaotic) j["delta_chaotic"] = *config.delta_chaotic;
    j["windows"] = config.windows;
  }
  if (config.experiment == ExperimentKind::dynamics)
    j["sites"] = {{"v", config.v_site}, {"w", config.w_site}};
  if (config.time)
    j["time"] = {{"t_max", config.time->t_max}, {"dt", config.time->dt}};
  if (config.ensemble) {
    const EnsembleBlock& e = *config.ensemble;
    const char* kind = e.kind == EnsembleKind::GOE    ? "GOE"
                       : e.kind == EnsembleKind::GUE  ? "GUE"
                       : e.kind == EnsembleKind::Haar ? "Haar"
                                                      : "DiagonalPhases";
    j["ensemble"] = {{"kind", kind},
                     {"dimension", e.dimension},
                     {"samples", e.samples},
                     {"seed", e.seed}};
  }
  if (!config.task.empty()) j["task"] = config.task;
  if (config.experiment == ExperimentKind::shorttime &&
      config.task == "klocal") {
    j["l_range"] = config.l_range;
    j["k"] = config.k;
  }
  json out;
  out["directory"] = config.output.directory;
  out["format"] = config.output.format;
  j["output"] = out;
  return j.dump(2) + "\n";
}

RunManifest run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  std::string dir = config.output.directory;
  if (dir.empty()) {
    const char* env = std::getenv("QCHAOS_OUTPUT_DIR");
    dir = (env && *env) ? env : ".";
  }
  fs::create_directories(dir);
  const fs::path out_dir(dir);

  std::vector<OutputFile> outputs;
  switch (config.experiment) {
    case ExperimentKind::spectrum:
      outputs = run_spectrum(config, out_dir);
      break;
    case ExperimentKind::eigencoherence:
      outputs = run_eigencoherence(config, out_dir);
      break;
    case ExperimentKind::majorization:
      outputs = run_majorization(config, out_dir);
      break;
    case ExperimentKind::dynamics:
      outputs = run_dynamics(config, out_dir);
      break;
    case ExperimentKind::rmt:
      outputs = run_rmt(config, out_dir);
      break;
    case ExperimentKind::shorttime:
      outputs = run_shorttime(config, out_dir);
      break;
  }

  RunManifest manifest;
  manifest.config_hash = fnv1a_hex(config.source_text);
  manifest.library_version = version();
  manifest.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  manifest.outputs = outputs;

  json j;
  j["config_hash"] = manifest.config_hash;
  j["library_version"] = manifest.library_version;
  j["wall_time_seconds"] = manifest.wall_time_seconds;
  j["outputs"] = json::array();
  for (const OutputFile& f : manifest.outputs)
    j["outputs"].push_back({{"file", f.file}, {"rows", f.rows}});
  std::ofstream mout(out_dir / "manifest.json", std::ios::binary);
  if (!mout) throw Error("cannot write manifest.json");
  mout << j.dump(2) << '\n';
  return manifest;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qchaos
