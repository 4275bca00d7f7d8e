// Copyright 2026 The mmbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mmbell/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmbell/bell.hpp"
#include "mmbell/loss.hpp"
#include "mmbell/macro_states.hpp"
#include "mmbell/scalar.hpp"
#include "mmbell/table_io.hpp"
#include "mmbell/verify.hpp"

namespace mmbell {

namespace {

struct GlobalOpts {
  std::string mode = "auto";
  std::string format = "csv";
  std::string output;
  // Measurement directions in units of pi; defaults are the optimal CHSH set.
  double phi_a = 0.0;
  double phi_a_prime = 0.25;
  double phi_b = 0.125;
  double phi_b_prime = -0.125;
};

// auto keeps N in exact rationals while factorials stay cheap, then switches
// to the log-space route.
NumericMode mode_for(const GlobalOpts& g, int n) {
  if (g.mode == "exact") return NumericMode::exact;
  if (g.mode == "log") return NumericMode::log_space;
  return n <= 64 ? NumericMode::exact : NumericMode::log_space;
}

TableFormat format_of(const GlobalOpts& g) {
  return g.format == "json" ? TableFormat::json : TableFormat::csv;
}

AngleSettings settings_of(const GlobalOpts& g) {
  constexpr double pi = std::numbers::pi;
  return AngleSettings{g.phi_a * pi, g.phi_a_prime * pi, g.phi_b * pi,
                       g.phi_b_prime * pi};
}

Cell scalar_cell(const Scalar& s) {
  if (s.is_exact()) return Cell{s.exact()};
  return Cell{s.to_double()};
}

int emit(const GlobalOpts& g, std::ostream& out, std::ostream& err,
         const std::function<void(std::ostream&)>& writer) {
  if (g.output.empty()) {
    writer(out);
    return 0;
  }
  std::ofstream file(g.output, std::ios::binary);
  if (!file) {
    err << "error: cannot open output file: " << g.output << "\n";
    return 1;
  }
  writer(file);
  return 0;
}

int run_vmax(const GlobalOpts& g, int max_n, std::ostream& out, std::ostream& err) {
  Table t;
  t.columns = {"n", "v_max"};
  for (int n = 0; n <= max_n; ++n) {
    Cell value = mode_for(g, n) == NumericMode::exact
                     ? Cell{v_max_closed(n)}
                     : Cell{v_max_value(n)};
    t.add_row({Cell{static_cast<long long>(n)}, std::move(value)});
  }
  return emit(g, out, err, [&](std::ostream& o) { write_table(t, format_of(g), o); });
}

int run_dist(const GlobalOpts& g, int max_n, int n_sigma, std::ostream& out,
             std::ostream& err) {
  Table t;
  t.columns = {"n", "n_sigma", "v"};
  for (int n = 0; n <= max_n; ++n) {
    const int lo = n_sigma >= 0 ? n_sigma : 0;
    const int hi = n_sigma >= 0 ? n_sigma : 2 * n + 1;
    for (int ns = lo; ns <= hi; ++ns) {
      t.add_row({Cell{static_cast<long long>(n)}, Cell{static_cast<long long>(ns)},
                 scalar_cell(distinguishability(n, ns, mode_for(g, n)))});
    }
  }
  return emit(g, out, err, [&](std::ostream& o) { write_table(t, format_of(g), o); });
}

int run_chsh(const GlobalOpts& g, int max_n, int n_sigma, std::ostream& out,
             std::ostream& err) {
  Table t;
  if (n_sigma < 0) {
    t.columns = {"n", "chsh_opt"};
    const double two_sqrt2 = 2.0 * std::sqrt(2.0);
    for (int n = 0; n <= max_n; ++n) {
      t.add_row({Cell{static_cast<long long>(n)}, Cell{two_sqrt2 * v_max_value(n)}});
    }
  } else {
    t.columns = {"n", "n_sigma", "chsh"};
    const AngleSettings settings = settings_of(g);
    for (int n = 0; n <= max_n; ++n) {
      t.add_row({Cell{static_cast<long long>(n)}, Cell{static_cast<long long>(n_sigma)},
                 Cell{chsh_value(n, n_sigma, settings)}});
    }
  }
  return emit(g, out, err, [&](std::ostream& o) { write_table(t, format_of(g), o); });
}

int run_spectrum(const GlobalOpts& g, double gain, int n_th, std::ostream& out,
                 std::ostream& err) {
  const PhotonSpectrum spec = photon_spectrum(GainSpec(gain), n_th);
  Table t;
  t.columns = {"n", "weight"};
  for (int n = n_th; n <= spec.n_max(); ++n) {
    t.add_row({Cell{static_cast<long long>(n)}, Cell{spec.weight(n)}});
  }
  return emit(g, out, err, [&](std::ostream& o) { write_table(t, format_of(g), o); });
}

int run_loss(const GlobalOpts& g, int max_n, int max_m, std::ostream& out,
             std::ostream& err) {
  Table t;
  t.columns = {"n", "m", "n_sigma", "v_bar"};
  for (int n = 0; n <= max_n; ++n) {
    for (int m = 0; m <= std::min(max_m, 2 * n + 1); ++m) {
      for (int ns = 0; ns <= 2 * n + 1 - m; ++ns) {
        t.add_row({Cell{static_cast<long long>(n)}, Cell{static_cast<long long>(m)},
                   Cell{static_cast<long long>(ns)},
                   scalar_cell(lossy_distinguishability(n, m, ns, mode_for(g, n)))});
      }
    }
  }
  return emit(g, out, err, [&](std::ostream& o) { write_table(t, format_of(g), o); });
}

int run_frontier(const GlobalOpts& g, int max_n, std::ostream& out,
                 std::ostream& err) {
  const std::vector<int> frontier = violation_frontier(max_n);
  return emit(g, out, err, [&](std::ostream& o) {
    const bool json = format_of(g) == TableFormat::json;
    o << (json ? "[" : "{");
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (i) o << ",";
      o << frontier[i];
    }
    o << (json ? "]" : "}") << "\n";
  });
}

int run_asymptote(const GlobalOpts& g, long long n, std::ostream& out,
                  std::ostream& err) {
  if (n < 0) throw std::domain_error("asymptote: negative N");
  const double v = v_max_value(n);
  const double err_abs = std::fabs(v - 2.0 / std::numbers::pi);
  Table t;
  t.columns = {"n", "v_max", "abs_err"};
  t.add_row({Cell{n}, Cell{v}, Cell{err_abs}});
  return emit(g, out, err, [&](std::ostream& o) { write_table(t, format_of(g), o); });
}

int run_bs_preselect(const GlobalOpts& g, double gain, double t2, int max_k,
                     std::ostream& out, std::ostream& err) {
  const std::vector<BsConvergenceRow> rows =
      bs_convergence_report(GainSpec(gain), t2, max_k);
  Table t;
  t.columns = {"k_th", "best_n_th", "tv_distance"};
  for (const BsConvergenceRow& row : rows) {
    t.add_row({Cell{static_cast<long long>(row.k_th)},
               Cell{static_cast<long long>(row.best_n_th)}, Cell{row.tv_distance}});
  }
  return emit(g, out, err, [&](std::ostream& o) { write_table(t, format_of(g), o); });
}

int run_verify(const GlobalOpts& g, const std::string& group, std::ostream& out,
               std::ostream& err) {
  VerifyOptions opts;
  opts.group_filter = group;
  const std::vector<VerifyGroupResult> results = run_verification(opts);
  bool all_pass = true;
  const int rc = emit(g, out, err, [&](std::ostream& o) {
    for (const VerifyGroupResult& r : results) {
      if (r.pass) {
        o << "ok " << r.name << ": " << r.detail << "\n";
      } else {
        all_pass = false;
        o << "FAIL " << r.name << ": " << r.detail << "\n";
      }
    }
  });
  if (rc != 0) return rc;
  return all_pass ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  GlobalOpts g;

  CLI::App app{"Bell tests on amplified photon-pair states: distinguishability,"
               " CHSH sweeps, preselection spectra, and loss studies."};
  app.require_subcommand(1);
  app.add_option("--mode", g.mode, "Numeric route: exact, log, or auto (exact for N <= 64)")
      ->check(CLI::IsMember({"exact", "log", "auto"}))
      ->capture_default_str();
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--output", g.output, "Write the table to this file instead of stdout");
  app.add_option("--phi-a", g.phi_a, "Setting a, in units of pi")->capture_default_str();
  app.add_option("--phi-ap", g.phi_a_prime, "Setting a', in units of pi")
      ->capture_default_str();
  app.add_option("--phi-b", g.phi_b, "Setting b, in units of pi")->capture_default_str();
  app.add_option("--phi-bp", g.phi_b_prime, "Setting b', in units of pi")
      ->capture_default_str();

  int vmax_max_n = 40;
  CLI::App* vmax = app.add_subcommand("vmax", "Best-threshold distinguishability per N");
  vmax->add_option("--max-n", vmax_max_n, "Largest N")->capture_default_str();

  int dist_max_n = 8;
  int dist_n_sigma = -1;
  CLI::App* dist = app.add_subcommand("dist", "Distinguishability v(N, N_sigma) sweep");
  dist->add_option("--max-n", dist_max_n, "Largest N")->capture_default_str();
  dist->add_option("--n-sigma", dist_n_sigma,
                   "Fix the detection threshold (default: all 0..2N+1)");

  int chsh_max_n = 10;
  int chsh_n_sigma = -1;
  CLI::App* chsh = app.add_subcommand(
      "chsh", "CHSH values: optimal envelope, or fixed threshold and angles");
  chsh->add_option("--max-n", chsh_max_n, "Largest N")->capture_default_str();
  chsh->add_option("--n-sigma", chsh_n_sigma,
                   "Fix the detection threshold and use the angle flags");

  double spectrum_gain = 1.0;
  int spectrum_n_th = 0;
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "Preselected photon-pair-number weights");
  spectrum->add_option("--gain", spectrum_gain, "Amplifier gain g")->capture_default_str();
  spectrum->add_option("--n-th", spectrum_n_th, "Preselection threshold N_th")
      ->capture_default_str();

  int loss_max_n = 4;
  int loss_max_m = 3;
  CLI::App* loss =
      app.add_subcommand("loss", "Distinguishability after losing M photons");
  loss->add_option("--max-n", loss_max_n, "Largest N")->capture_default_str();
  loss->add_option("--max-m", loss_max_m, "Largest lost-photon count")
      ->capture_default_str();

  int frontier_max_n = 10;
  CLI::App* frontier =
      app.add_subcommand("frontier", "All N whose optimal CHSH exceeds 2");
  frontier->add_option("--max-n", frontier_max_n, "Largest N scanned")
      ->capture_default_str();

  long long asymptote_n = 1000000;
  CLI::App* asymptote =
      app.add_subcommand("asymptote", "v_max at large N against the 2/pi limit");
  asymptote->add_option("--n", asymptote_n, "N to evaluate")->capture_default_str();

  double bs_gain = 1.5;
  double bs_t2 = 0.5;
  int bs_max_k = 30;
  CLI::App* bs = app.add_subcommand(
      "bs-preselect", "Beamsplitter preselection against the theoretical one");
  bs->add_option("--gain", bs_gain, "Amplifier gain g")->capture_default_str();
  bs->add_option("--t2", bs_t2, "Beamsplitter transmissivity t^2")->capture_default_str();
  bs->add_option("--max-k", bs_max_k, "Largest reflected-count threshold K_th")
      ->capture_default_str();

  std::string verify_group;
  CLI::App* verify = app.add_subcommand("verify", "Cross-validate against brute-force routes");
  verify->add_option("--group", verify_group, "Run a single check group")
      ->check(CLI::IsMember(verification_group_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "Run with --help for usage.\n";
    return 2;
  }

  try {
    if (vmax->parsed()) return run_vmax(g, vmax_max_n, out, err);
    if (dist->parsed()) return run_dist(g, dist_max_n, dist_n_sigma, out, err);
    if (chsh->parsed()) return run_chsh(g, chsh_max_n, chsh_n_sigma, out, err);
    if (spectrum->parsed()) return run_spectrum(g, spectrum_gain, spectrum_n_th, out, err);
    if (loss->parsed()) return run_loss(g, loss_max_n, loss_max_m, out, err);
    if (frontier->parsed()) return run_frontier(g, frontier_max_n, out, err);
    if (asymptote->parsed()) return run_asymptote(g, asymptote_n, out, err);
    if (bs->parsed()) return run_bs_preselect(g, bs_gain, bs_t2, bs_max_k, out, err);
    if (verify->parsed()) return run_verify(g, verify_group, out, err);
  } catch (const EmptySupportError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no command selected\n";
  return 2;
}

}  // namespace mmbell
