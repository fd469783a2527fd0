// Command-line front end: generate, count, verify, tabulate, fit, render and
// inspect bracketing covers.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid arguments,
// 3 budget exceeded.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bracketing/bracketing.hpp"
#include "cover_json.hpp"

namespace {

using namespace bracketing;

enum ExitCode { kOk = 0, kVerifyFailed = 1, kBadArgs = 2, kOverBudget = 3 };

struct Options {
  std::string method;
  std::string base = "layered";
  double delta = 0.0;
  int dim = 2;
  std::string p = "auto";
  double k = 0.0;
  double c = 1.7;
  std::size_t budget = kDefaultBudget;
  std::string in;
  std::string out;
  std::string format = "txt";
  double tol_rel = kDefaultRelTol;
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  std::vector<double> deltas;
  bool csv = false;
  int size = 800;
};

Method parse_method(const std::string& s) {
  const auto m = method_from_string(s);
  if (!m) throw std::invalid_argument("unknown method '" + s + "'");
  return *m;
}

std::optional<int> parse_p(const Options& o, double delta) {
  if (o.p == "auto") return p_auto(delta, o.k, o.c);
  std::size_t used = 0;
  const int p = std::stoi(o.p, &used);
  if (used != o.p.size() || p < 0) throw std::invalid_argument("--p must be a nonnegative integer or 'auto'");
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << text;
}

Cover load_cover(const std::string& path) {
  const auto text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return cli::from_json(nlohmann::json::parse(text));
  return parse(text);
}

int cmd_gen(const Options& o) {
  const Method method = parse_method(o.method);
  Cover cover = [&] {
    if (method == Method::unanchored) {
      const Method base = parse_method(o.base);
      const double half = o.delta / 2.0;
      const auto p = base == Method::reoriented ? parse_p(o, half) : std::nullopt;
      return unanchored_product_cover(make_cover(base, half, p, 2, o.budget));
    }
    const auto p = method == Method::reoriented ? parse_p(o, o.delta) : std::nullopt;
    if (p && reoriented_outside_regime(o.delta, *p))
      std::cerr << "warning: 2^p >= 1/delta, sectors are thinner than a stripe\n";
    return make_cover(method, o.delta, p, o.dim, o.budget);
  }();
  if (o.format == "json")
    write_file(o.out, cli::to_json(cover).dump() + "\n");
  else
    write_file(o.out, serialize(cover));
  std::cout << to_string(cover.method()) << " delta=" << cover.delta() << " brackets=" << cover.size()
            << " -> " << o.out << "\n";
  return kOk;
}

int cmd_count(const Options& o) {
  const Method method = parse_method(o.method);
  const auto p = method == Method::reoriented ? parse_p(o, o.delta) : std::nullopt;
  std::cout << cover_count(method, o.delta, p, o.dim) << "\n";
  return kOk;
}

int cmd_verify(const Options& o, bool delta_given) {
  const Cover cover = load_cover(o.in);
  const double delta = delta_given ? o.delta : cover.delta();
  VerificationReport r;
  std::string coverage_kind = "exact sweep";
  if (!cover.is_anchored()) {
    r = verify_unanchored(cover, delta, o.samples, o.seed, o.tol_rel);
    coverage_kind = "sampled, " + std::to_string(o.samples) + " samples, seed " + std::to_string(o.seed);
  } else if (cover.dim() == 2) {
    r = verify_anchored(cover, delta, o.tol_rel);
  } else {
    r = verify_weights(cover, delta, o.tol_rel);
    r.coverage_ok = verify_grid_tiling(cover);
    coverage_kind = "grid tiling";
  }
  std::printf("brackets:   %zu\n", r.checked_brackets);
  std::printf("weights:    %s (max %.17g, limit %.17g)\n", r.weights_ok ? "ok" : "FAIL", r.max_weight,
              delta * (1.0 + r.tolerance));
  std::printf("coverage:   %s (%s)\n", r.coverage_ok ? "ok" : "FAIL", coverage_kind.c_str());
  if (r.uncovered_witness) {
    std::printf("uncovered: ");
    for (double v : *r.uncovered_witness) std::printf(" %.17g", v);
    std::printf("\n");
  }
  return r.ok() ? kOk : kVerifyFailed;
}

int cmd_table(const Options& o) {
  const auto& deltas = o.deltas.empty() ? reference_deltas() : o.deltas;
  for (double d : deltas) detail::require_delta(d);
  std::cout << format_table(table_rows(deltas, o.k, o.c, o.budget), o.csv);
  return kOk;
}

int cmd_fit(const Options& o) {
  const auto& deltas = o.deltas.empty() ? reference_deltas() : o.deltas;
  std::printf("%-12s %-11s %14s %14s\n", "delta", "method", "count", "count*d^2");
  for (const auto& row : fit_coefficients(parse_method(o.method), deltas, o.k, o.c))
    std::printf("%-12g %-11s %14llu %14.8f\n", row.delta, to_string(row.method),
                static_cast<unsigned long long>(row.count), row.coefficient);
  return kOk;
}

int cmd_render(const Options& o) {
  const Cover cover = load_cover(o.in);
  write_file(o.out, render_svg(cover, o.size));
  std::cout << cover.size() << " rectangles -> " << o.out << "\n";
  return kOk;
}

int cmd_stats(const Options& o) {
  const Cover cover = load_cover(o.in);
  std::printf("method:     %s\n", to_string(cover.method()));
  std::printf("delta:      %.17g\n", cover.delta());
  std::printf("dim:        %d\n", cover.dim());
  std::printf("brackets:   %zu\n", cover.size());
  if (!cover.is_anchored() || cover.dim() != 2) {
    const auto w = verify_weights(cover, cover.delta());
    std::printf("max weight: %.17g\n", w.max_weight);
    return kOk;
  }
  const auto s = overlap_stats(cover);
  std::printf("total area: %.12f\n", s.total_bracket_area);
  std::printf("union area: %.12f\n", s.union_area);
  std::printf("max depth:  %d\n", s.max_depth);
  std::printf("weights (bin lower edge, count):\n");
  for (const auto& [edge, n] : s.weight_histogram) std::printf("  %.6g %zu\n", edge, n);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bracketing covers of anchored axis-parallel boxes"};
  app.require_subcommand(1);
  Options o;

  const auto add_method = [&](CLI::App* cmd) {
    cmd->add_option("--method", o.method, "grid|thiemard|layered|reoriented|unanchored")->required();
  };
  const auto add_p = [&](CLI::App* cmd) {
    cmd->add_option("--p", o.p, "sector exponent for reoriented (integer or 'auto')");
    cmd->add_option("--k", o.k, "offset k of the automatic p rule");
    cmd->add_option("--c", o.c, "divisor c of the automatic p rule");
  };

  auto* gen = app.add_subcommand("gen", "materialize a cover and write it to a file");
  add_method(gen);
  gen->add_option("--delta", o.delta, "bracket weight bound")->required();
  gen->add_option("--dim", o.dim, "dimension (grid only)");
  add_p(gen);
  gen->add_option("--base", o.base, "anchored cover used by the unanchored product");
  gen->add_option("--budget", o.budget, "maximum number of brackets to materialize");
  gen->add_option("--out", o.out, "output path")->required();
  gen->add_option("--format", o.format, "txt|json")->check(CLI::IsMember({"txt", "json"}));

  auto* count = app.add_subcommand("count", "cardinality from the counting identities");
  add_method(count);
  count->add_option("--delta", o.delta)->required();
  count->add_option("--dim", o.dim, "dimension (grid only)");
  add_p(count);

  auto* verify = app.add_subcommand("verify", "check weights and coverage of a cover file");
  verify->add_option("path", o.in)->required();
  auto* verify_delta = verify->add_option("--delta", o.delta, "weight bound (default: file header)");
  verify->add_option("--tol-rel", o.tol_rel, "relative weight tolerance");
  verify->add_option("--samples", o.samples, "sampled pairs for unanchored covers");
  verify->add_option("--seed", o.seed, "sampling seed for unanchored covers");

  auto* table = app.add_subcommand("table", "cardinalities of all four constructions");
  table->add_option("--deltas", o.deltas, "comma-separated deltas")->delimiter(',');
  table->add_option("--k", o.k);
  table->add_option("--c", o.c);
  table->add_option("--budget", o.budget, "materialize cells up to this many brackets");
  table->add_flag("--csv", o.csv);

  auto* fit = app.add_subcommand("fit", "leading coefficient count * delta^2");
  add_method(fit);
  fit->add_option("--deltas", o.deltas, "comma-separated deltas")->delimiter(',');

  auto* render = app.add_subcommand("render", "draw a 2-D anchored cover as SVG");
  render->add_option("path", o.in)->required();
  render->add_option("--out", o.out)->required();
  render->add_option("--size", o.size, "image size in pixels");

  auto* stats = app.add_subcommand("stats", "overlap statistics of a cover file");
  stats->add_option("path", o.in)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadArgs;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*count) return cmd_count(o);
    if (*verify) return cmd_verify(o, verify_delta->count() > 0);
    if (*table) return cmd_table(o);
    if (*fit) return cmd_fit(o);
    if (*render) return cmd_render(o);
    if (*stats) return cmd_stats(o);
  } catch (const budget_exceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOverBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadArgs;
  }
  return kBadArgs;
}
