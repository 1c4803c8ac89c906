#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tailfit/empirical.hpp"
#include "tailfit/errors.hpp"
#include "tailfit/fit.hpp"
#include "tailfit/histogram.hpp"
#include "tailfit/pled.hpp"
#include "tailfit/render.hpp"
#include "tailfit/sampler.hpp"
#include "tailfit/table.hpp"
#include "tailfit/tpa.hpp"
#include "tailfit/version.hpp"

namespace {

using namespace tailfit;

// Output document: '#'-prefixed manifest preamble followed by the body
// (CSV rows or "key = value" report lines). Everything in it is a pure
// function of the parsed command, so identical invocations serialize to
// identical bytes. The preamble records every resolved parameter; re-running
// the command it describes regenerates the file.
struct OutputDoc {
  std::vector<std::string> preamble;
  std::vector<std::string> body;

  void meta(const std::string& key, const std::string& value) {
    preamble.push_back("# " + key + ": " + value);
  }
  void kv(const std::string& key, const std::string& value) {
    body.push_back(key + " = " + value);
  }

  std::string serialize() const {
    std::string out;
    for (const std::string& line : preamble) {
      out += line;
      out += '\n';
    }
    for (const std::string& line : body) {
      out += line;
      out += '\n';
    }
    return out;
  }
};

OutputDoc new_doc(const std::string& command) {
  OutputDoc doc;
  doc.preamble.push_back(std::string("# tailfit ") + kVersion);
  doc.meta("command", command);
  return doc;
}

void emit(const OutputDoc& doc, const std::string& out_path) {
  const std::string bytes = doc.serialize();
  if (out_path.empty()) {
    std::cout << bytes;
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  const std::filesystem::path target(out_path);
  const std::filesystem::path tmp(out_path + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open output file: " + tmp.string());
    f << bytes;
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("failed writing output file: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place: " + target.string());
  }
}

struct LoadedHistogram {
  DegreeHistogram hist;
  std::string label;
  std::string digest;
};

LoadedHistogram load_input(const std::string& path) {
  std::string bytes;
  std::string label;
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    bytes = buf.str();
    label = "<stdin>";
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open histogram file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    bytes = buf.str();
    label = path;
  }
  std::istringstream stream(bytes);
  LoadedHistogram in;
  in.hist = parse_histogram(stream, label);
  in.label = label;
  in.digest = render_hash(fnv1a64(std::span<const char>(bytes.data(), bytes.size())));
  return in;
}

// Degree specs: comma-separated integers and inclusive "a..b" ranges,
// e.g. "2..5000" or "1,2,10..20". Result is sorted and deduplicated.
std::vector<std::int64_t> parse_degree_spec(const std::string& spec) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    const std::string seg = spec.substr(pos, comma - pos);
    pos = comma + 1;
    if (seg.empty())
      throw InvalidParamsError("degree spec: empty segment in '" + spec + "'");
    const std::size_t dots = seg.find("..");
    auto parse_int = [&](const std::string& tok) {
      std::int64_t v = 0;
      const char* first = tok.data();
      const char* last = tok.data() + tok.size();
      auto [p, ec] = std::from_chars(first, last, v);
      if (ec != std::errc{} || p != last)
        throw InvalidParamsError("degree spec: '" + tok + "' is not an integer");
      return v;
    };
    if (dots == std::string::npos) {
      out.push_back(parse_int(seg));
    } else {
      const std::int64_t lo = parse_int(seg.substr(0, dots));
      const std::int64_t hi = parse_int(seg.substr(dots + 2));
      const std::vector<std::int64_t> range = degree_range(lo, hi);
      out.insert(out.end(), range.begin(), range.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw InvalidParamsError("degree spec: no degrees given");
  return out;
}

void add_evaluation_rows(OutputDoc& doc, const ModelEvaluation& ev) {
  doc.body.push_back("degree,pmf,ccdf");
  doc.body.reserve(doc.body.size() + ev.degrees.size());
  for (std::size_t i = 0; i < ev.degrees.size(); ++i)
    doc.body.push_back(std::to_string(ev.degrees[i]) + "," + render_double(ev.pmf[i]) +
                       "," + render_double(ev.ccdf[i]));
}

void add_fit_body(OutputDoc& doc, const FitReport& rep, const std::string& prefix,
                  bool with_residuals) {
  const std::string p = prefix.empty() ? "" : prefix + ".";
  if (rep.model_id == ModelId::tpa) {
    doc.kv(p + "a2", std::to_string(rep.tpa().a2));
    doc.kv(p + "w", render_double(rep.tpa().w));
  } else {
    doc.kv(p + "b", render_double(rep.pled().b));
    doc.kv(p + "c", render_double(rep.pled().c));
  }
  doc.kv(p + "sse_log10_ccdf", render_double(rep.sse_log10_ccdf));
  doc.kv(p + "r", render_double(rep.r));
  doc.kv(p + "r_squared", render_double(rep.r_squared));
  doc.kv(p + "n_points", std::to_string(rep.n_points));
  if (with_residuals) {
    doc.body.push_back("residuals:");
    doc.body.push_back("degree,log10_empirical,log10_model");
    for (const Residual& r : rep.residuals)
      doc.body.push_back(std::to_string(r.degree) + "," + render_double(r.log10_empirical) +
                         "," + render_double(r.log10_model));
  }
}

struct CliState {
  // eval/sample tpa
  std::int64_t a2 = 1;
  double w = 1.0;
  std::int64_t a1 = -1;  // <0 means unset
  // eval/sample pled
  double b = 1.0;
  double c = 1.0;
  double tol = kPledDefaultTol;
  // shared
  std::int64_t d_min = 1;
  std::string degrees_spec;
  std::string input_path;
  std::string out_path;
  // sample
  std::int64_t n = 1;
  std::uint64_t seed = 0;
  // fit config
  FitConfig config;

  TpaParams tpa_params() const {
    TpaParams p{a2, w, d_min};
    if (a1 >= 0) p.a1 = a1;
    return p;
  }
  PledParams pled_params() const { return PledParams{b, c, d_min}; }

  void tpa_meta(OutputDoc& doc) const {
    doc.meta("a2", std::to_string(a2));
    doc.meta("w", render_double(w));
    if (a1 >= 0) doc.meta("a1", std::to_string(a1));
    doc.meta("dmin", std::to_string(d_min));
  }
  void pled_meta(OutputDoc& doc) const {
    doc.meta("b", render_double(b));
    doc.meta("c", render_double(c));
    doc.meta("dmin", std::to_string(d_min));
  }
};

void add_fit_config_flags(CLI::App* cmd, CliState& st) {
  cmd->add_option("--a2-lo", st.config.a2_lo, "Lower a2 bound");
  cmd->add_option("--a2-hi", st.config.a2_hi, "Upper a2 bound");
  cmd->add_option("--w-lo", st.config.w_range.lo, "Lower w bound");
  cmd->add_option("--w-hi", st.config.w_range.hi, "Upper w bound");
  cmd->add_option("--b-lo", st.config.b_range.lo, "Lower b bound");
  cmd->add_option("--b-hi", st.config.b_range.hi, "Upper b bound");
  cmd->add_option("--c-lo", st.config.c_range.lo, "Lower c bound");
  cmd->add_option("--c-hi", st.config.c_range.hi, "Upper c bound");
  cmd->add_option("--grid", st.config.grid_density, "Grid points per axis");
  cmd->add_option("--refine", st.config.refine_iterations, "Refinement iterations");
  cmd->add_option("--shrink", st.config.refine_shrink, "Refinement shrink factor");
}

int dispatch(const std::function<void()>& action) {
  try {
    action();
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const SearchFailureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degree-distribution evaluation, fitting and sampling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("tailfit ") + kVersion);

  CliState st;
  std::function<void()> action;

  CLI::App* eval = app.add_subcommand("eval", "Tabulate a model pmf/ccdf");
  eval->require_subcommand(1);
  CLI::App* eval_tpa = eval->add_subcommand("tpa", "Evaluate the TPA distribution");
  eval_tpa->add_option("--a2", st.a2, "Tail anchor a2")->required();
  eval_tpa->add_option("--w", st.w, "Tempering parameter w")->required();
  eval_tpa->add_option("--dmin,--d-min", st.d_min, "Minimum degree")->capture_default_str();
  eval_tpa->add_option("--a1", st.a1, "Optional recorded a1 scale");
  eval_tpa->add_option("--degrees", st.degrees_spec, "Degrees, e.g. 2..5000 or 1,2,5")
      ->required();
  eval_tpa->add_option("--out", st.out_path, "Output file (default stdout)");
  eval_tpa->callback([&] {
    action = [&] {
      const TpaDistribution dist(st.tpa_params());
      const std::vector<std::int64_t> degrees = parse_degree_spec(st.degrees_spec);
      OutputDoc doc = new_doc("eval tpa");
      st.tpa_meta(doc);
      doc.meta("degrees", st.degrees_spec);
      add_evaluation_rows(doc, tabulate(dist, degrees));
      emit(doc, st.out_path);
    };
  });

  CLI::App* eval_pled = eval->add_subcommand("pled", "Evaluate the PLED distribution");
  eval_pled->add_option("--b", st.b, "Power-law exponent b")->required();
  eval_pled->add_option("--c", st.c, "Exponential decay scale c")->required();
  eval_pled->add_option("--dmin,--d-min", st.d_min, "Minimum degree")->capture_default_str();
  eval_pled->add_option("--tol", st.tol, "Tail truncation tolerance")->capture_default_str();
  eval_pled->add_option("--degrees", st.degrees_spec, "Degrees, e.g. 2..5000 or 1,2,5")
      ->required();
  eval_pled->add_option("--out", st.out_path, "Output file (default stdout)");
  eval_pled->callback([&] {
    action = [&] {
      const PledDistribution dist(st.pled_params(), st.tol);
      const std::vector<std::int64_t> degrees = parse_degree_spec(st.degrees_spec);
      OutputDoc doc = new_doc("eval pled");
      st.pled_meta(doc);
      doc.meta("tol", render_double(st.tol));
      doc.meta("degrees", st.degrees_spec);
      add_evaluation_rows(doc, tabulate(dist, degrees));
      emit(doc, st.out_path);
    };
  });

  CLI::App* renorm = app.add_subcommand("renorm", "Truncate and renormalize a histogram");
  renorm->add_option("--input", st.input_path, "Histogram file ('-' for stdin)")->required();
  renorm->add_option("--dmin,--d-min", st.d_min, "Truncation cutoff")->required();
  renorm->add_option("--out", st.out_path, "Output file (default stdout)");
  renorm->callback([&] {
    action = [&] {
      const LoadedHistogram in = load_input(st.input_path);
      const EmpiricalDistribution emp = truncate_renormalize(in.hist, st.d_min);
      OutputDoc doc = new_doc("renorm");
      doc.meta("input", in.label + " fnv1a=" + in.digest);
      doc.meta("dmin", std::to_string(emp.d_min()));
      doc.meta("n_total", std::to_string(emp.n_total()));
      doc.meta("n_kept", std::to_string(emp.n_kept()));
      doc.meta("eta", render_double(emp.eta()));
      doc.body.push_back("degree,pmf,ccdf");
      for (std::size_t i = 0; i < emp.degrees().size(); ++i)
        doc.body.push_back(std::to_string(emp.degrees()[i]) + "," +
                           render_double(emp.pmf()[i]) + "," +
                           render_double(emp.ccdf()[i]));
      emit(doc, st.out_path);
    };
  });

  CLI::App* fit = app.add_subcommand("fit", "Fit a model to a histogram");
  fit->require_subcommand(1);
  for (const char* which : {"tpa", "pled"}) {
    const bool is_tpa = std::string(which) == "tpa";
    CLI::App* cmd = fit->add_subcommand(
        which, is_tpa ? "Fit the TPA distribution" : "Fit the PLED distribution");
    cmd->add_option("--input", st.input_path, "Histogram file ('-' for stdin)")->required();
    cmd->add_option("--dmin,--d-min", st.d_min, "Truncation cutoff")->required();
    add_fit_config_flags(cmd, st);
    cmd->add_option("--out", st.out_path, "Output file (default stdout)");
    cmd->callback([&, is_tpa] {
      action = [&, is_tpa] {
        const LoadedHistogram in = load_input(st.input_path);
        const EmpiricalDistribution emp = truncate_renormalize(in.hist, st.d_min);
        const FitReport rep = is_tpa ? fit_tpa(emp, st.config) : fit_pled(emp, st.config);
        OutputDoc doc = new_doc(is_tpa ? "fit tpa" : "fit pled");
        doc.meta("input", in.label + " fnv1a=" + in.digest);
        doc.meta("dmin", std::to_string(emp.d_min()));
        doc.meta("config", st.config.digest());
        doc.kv("model", to_string(rep.model_id));
        doc.kv("d_min", std::to_string(rep.d_min));
        add_fit_body(doc, rep, "", true);
        emit(doc, st.out_path);
      };
    });
  }

  CLI::App* smp = app.add_subcommand("sample", "Draw degrees from a model");
  smp->require_subcommand(1);
  CLI::App* smp_tpa = smp->add_subcommand("tpa", "Sample the TPA distribution");
  smp_tpa->add_option("--a2", st.a2, "Tail anchor a2")->required();
  smp_tpa->add_option("--w", st.w, "Tempering parameter w")->required();
  smp_tpa->add_option("--dmin,--d-min", st.d_min, "Minimum degree")->capture_default_str();
  smp_tpa->add_option("--a1", st.a1, "Optional recorded a1 scale");
  smp_tpa->add_option("--n", st.n, "Number of draws")->required();
  smp_tpa->add_option("--seed", st.seed, "RNG seed")->capture_default_str();
  smp_tpa->add_option("--out", st.out_path, "Output file (default stdout)");
  smp_tpa->callback([&] {
    action = [&] {
      const DegreeHistogram hist = sample({st.tpa_params(), st.n, st.seed});
      OutputDoc doc = new_doc("sample tpa");
      st.tpa_meta(doc);
      doc.meta("n", std::to_string(st.n));
      doc.meta("seed", std::to_string(st.seed));
      doc.meta("columns", "degree,count");
      for (const DegreeHistogram::Entry& e : hist.entries)
        doc.body.push_back(std::to_string(e.degree) + "," + std::to_string(e.count));
      emit(doc, st.out_path);
    };
  });

  CLI::App* smp_pled = smp->add_subcommand("pled", "Sample the PLED distribution");
  smp_pled->add_option("--b", st.b, "Power-law exponent b")->required();
  smp_pled->add_option("--c", st.c, "Exponential decay scale c")->required();
  smp_pled->add_option("--dmin,--d-min", st.d_min, "Minimum degree")->capture_default_str();
  smp_pled->add_option("--n", st.n, "Number of draws")->required();
  smp_pled->add_option("--seed", st.seed, "RNG seed")->capture_default_str();
  smp_pled->add_option("--out", st.out_path, "Output file (default stdout)");
  smp_pled->callback([&] {
    action = [&] {
      const DegreeHistogram hist = sample({st.pled_params(), st.n, st.seed});
      OutputDoc doc = new_doc("sample pled");
      st.pled_meta(doc);
      doc.meta("n", std::to_string(st.n));
      doc.meta("seed", std::to_string(st.seed));
      doc.meta("columns", "degree,count");
      for (const DegreeHistogram::Entry& e : hist.entries)
        doc.body.push_back(std::to_string(e.degree) + "," + std::to_string(e.count));
      emit(doc, st.out_path);
    };
  });

  CLI::App* cmp = app.add_subcommand("compare", "Fit both models and compare objectives");
  cmp->add_option("--input", st.input_path, "Histogram file ('-' for stdin)")->required();
  cmp->add_option("--dmin,--d-min", st.d_min, "Truncation cutoff")->required();
  add_fit_config_flags(cmp, st);
  cmp->add_option("--out", st.out_path, "Output file (default stdout)");
  cmp->callback([&] {
    action = [&] {
      const LoadedHistogram in = load_input(st.input_path);
      const EmpiricalDistribution emp = truncate_renormalize(in.hist, st.d_min);
      const FitReport rt = fit_tpa(emp, st.config);
      const FitReport rp = fit_pled(emp, st.config);
      OutputDoc doc = new_doc("compare");
      doc.meta("input", in.label + " fnv1a=" + in.digest);
      doc.meta("dmin", std::to_string(emp.d_min()));
      doc.meta("config", st.config.digest());
      doc.kv("d_min", std::to_string(emp.d_min()));
      add_fit_body(doc, rt, "tpa", false);
      add_fit_body(doc, rp, "pled", false);
      doc.kv("sse_difference", render_double(rt.sse_log10_ccdf - rp.sse_log10_ccdf));
      emit(doc, st.out_path);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return dispatch(action);
}
