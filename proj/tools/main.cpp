// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "wavebranch/wavebranch.h"

namespace fs = std::filesystem;
using nlohmann::json;
using wbcli::RunConfig;

namespace {

enum Exit { kOk = 0, kInternal = 1, kBadConfig = 2, kInadmissible = 3, kNoBifurcation = 4, kNewtonFirst = 5 };

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void fail_status(wbr_status st, const std::string& context) {
  int code = kInternal;
  switch (st) {
    case WBR_ERR_CONFIG:
    case WBR_ERR_INVALID_ARGUMENT:
    case WBR_ERR_DOMAIN:
    case WBR_ERR_PARAMETER_RANGE:
    case WBR_ERR_SINGULAR_COEFFICIENT: code = kBadConfig; break;
    case WBR_ERR_ADMISSIBILITY: code = kInadmissible; break;
    case WBR_ERR_NO_BIFURCATION: code = kNoBifurcation; break;
    case WBR_ERR_NEWTON: code = kNewtonFirst; break;
    default: break;
  }
  throw Failure{code, context + ": " + wbr_status_string(st) + ": " + wbr_last_error()};
}

void check(wbr_status st, const std::string& context) {
  if (st != WBR_OK) fail_status(st, context);
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Failure{kInternal, "SHA-256 digest failed"};
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 15];
  }
  return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw Failure{kInternal, "cannot write " + tmp.string()};
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Failure{kInternal, "cannot rename " + tmp.string() + ": " + ec.message()};
}

class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}
  void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }
  const fs::path& dir() const { return dir_; }

  void flush(json manifest) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Failure{kInternal, "cannot create " + dir_.string() + ": " + ec.message()};
    json outputs = json::array();
    for (const auto& [name, content] : files_) {
      write_atomic(dir_ / name, content);
      outputs.push_back({{"file", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
    }
    manifest["outputs"] = outputs;
    write_atomic(dir_ / "manifest.json", manifest.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

struct VortHandle {
  wbr_vorticity* p = nullptr;
  ~VortHandle() { wbr_vorticity_destroy(p); }
};
struct ProblemHandle {
  wbr_problem* p = nullptr;
  ~ProblemHandle() { wbr_problem_destroy(p); }
};
struct BranchHandle {
  wbr_branch* p = nullptr;
  ~BranchHandle() { wbr_branch_destroy(p); }
};
struct WaveHandle {
  wbr_wave* p = nullptr;
  ~WaveHandle() { wbr_wave_destroy(p); }
};

void make_vorticity(const RunConfig& c, VortHandle& v) {
  std::vector<wbr_segment> segs;
  for (const auto& s : c.segments) {
    segs.push_back({s.s_lo, s.s_hi, s.kind, s.coeffs.data(), s.coeffs.size(), s.rate, s.amplitude, s.exponent});
  }
  check(wbr_vorticity_create(segs.data(), segs.size(), c.decay_exponent, &v.p), "vorticity");
}

wbr_admissibility admissibility(const RunConfig& c, const VortHandle& v) {
  wbr_admissibility a{};
  check(wbr_check_admissible(v.p, c.g, &a), "admissibility");
  return a;
}

json admissibility_json(const wbr_admissibility& a) {
  return {{"gamma_inf", a.gamma_inf}, {"gamma_infinity", a.gamma_infinity}, {"margin", a.margin},
          {"gamma_inf_ok", a.gamma_inf_ok != 0}, {"decay_ok", a.decay_ok != 0}, {"pass", a.pass != 0}};
}

const double* bracket_ptr(const RunConfig& c, double (&buf)[2]) {
  if (!c.bracket) return nullptr;
  buf[0] = c.bracket->first;
  buf[1] = c.bracket->second;
  return buf;
}

std::vector<double> nodes(const ProblemHandle& pr) {
  std::vector<double> p(wbr_problem_np(pr.p));
  check(wbr_problem_nodes(pr.p, p.data(), p.size()), "grid");
  return p;
}

struct Args {
  std::string config;
  std::vector<std::string> overrides;
  double lambda = 0.0;
  std::string scan;
  long point = 0;
};

int run(const std::string& sub, const Args& args) {
  std::string text;
  {
    std::ifstream f(args.config, std::ios::binary);
    if (!f) throw Failure{kBadConfig, "cannot read config " + args.config};
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Failure{kBadConfig, "config is not valid JSON"};
  RunConfig cfg;
  try {
    for (const auto& o : args.overrides) wbcli::apply_override(doc, o);
    cfg = wbcli::parse_config(doc);
  } catch (const wbcli::ConfigError& e) {
    throw Failure{kBadConfig, e.what()};
  }
  if (const char* env = std::getenv("WAVEBRANCH_OUTPUT_DIR"); env != nullptr && *env != '\0') cfg.output_dir = env;

  Artifacts out(cfg.output_dir);
  json manifest = {{"tool", "wavebranch"},
                   {"version", wbr_version()},
                   {"subcommand", sub},
                   {"config_file", fs::path(args.config).filename().string()},
                   {"config_sha256", sha256_hex(text)},
                   {"overrides", args.overrides}};
  json arguments = json::object();

  VortHandle vort;
  make_vorticity(cfg, vort);
  const auto adm = admissibility(cfg, vort);

  if (sub == "check") {
    out.add("check.json", json{{"g", cfg.g}, {"admissibility", admissibility_json(adm)}}.dump(2) + "\n");
    manifest["arguments"] = arguments;
    out.flush(manifest);
    std::cout << "margin " << num(adm.margin) << (adm.pass ? " admissible" : " NOT admissible") << "\n";
    return adm.pass ? kOk : kInadmissible;
  }
  if (!adm.pass) {
    throw Failure{kInadmissible, "vorticity violates the admissibility hypotheses (margin " + num(adm.margin) + ")"};
  }

  ProblemHandle pr;
  check(wbr_problem_create(vort.p, cfg.g, cfg.delta, &cfg.grid, &pr.p), "grid");
  double bbuf[2];
  const double* bracket = bracket_ptr(cfg, bbuf);
  int code = kOk;

  if (sub == "laminar") {
    arguments["lambda"] = args.lambda;
    const auto p = nodes(pr);
    std::vector<double> h(p.size());
    std::vector<double> hp(p.size());
    double ode = 0.0;
    double surf = 0.0;
    check(wbr_laminar_profile(pr.p, args.lambda, h.data(), hp.data(), p.size(), &ode, &surf), "laminar");
    double disc = 0.0;
    check(wbr_laminar_residual(pr.p, args.lambda, &disc), "laminar residual");
    double c = 0.0;
    check(wbr_wave_speed(vort.p, args.lambda, &c), "wave speed");
    std::string csv = "p,H,H_p\n";
    for (std::size_t i = 0; i < p.size(); ++i) csv += num(p[i]) + "," + num(h[i]) + "," + num(hp[i]) + "\n";
    out.add("laminar.csv", csv);
    out.add("laminar.json", json{{"lambda", args.lambda},
                                 {"c", c},
                                 {"ode_residual", ode},
                                 {"surface_residual", surf},
                                 {"discrete_residual", disc}}
                                    .dump(2) +
                                "\n");
    std::cout << "laminar lambda " << num(args.lambda) << " residual " << num(disc) << "\n";
  } else if (sub == "dispersion") {
    if (!args.scan.empty()) {
      arguments["scan"] = args.scan;
      double lo = 0.0;
      double hi = 0.0;
      long n = 0;
      char tail = 0;
      if (std::sscanf(args.scan.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &n, &tail) != 3 || n < 2 || !(lo < hi)) {
        throw Failure{kBadConfig, "--scan expects lo:hi:n with lo < hi and n >= 2"};
      }
      std::string csv = "lambda,mu\n";
      for (long k = 0; k < n; ++k) {
        const double lam = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
        double mu = std::nan("");
        if (wbr_dispersion_mu(pr.p, lam, cfg.epsilon, cfg.mode_k, &mu) != WBR_OK) mu = std::nan("");
        csv += num(lam) + "," + num(mu) + "\n";
      }
      out.add("dispersion_scan.csv", csv);
    }
    wbr_bifurcation bif{};
    const auto st = wbr_find_bifurcation(pr.p, cfg.epsilon, cfg.mode_k, bracket, &bif);
    json rep = {{"epsilon", cfg.epsilon}, {"mode_k", cfg.mode_k}};
    if (st == WBR_OK) {
      double c = 0.0;
      check(wbr_wave_speed(vort.p, bif.lambda, &c), "wave speed");
      rep["found"] = true;
      rep["lambda"] = bif.lambda;
      rep["c"] = c;
      rep["mu"] = bif.mu;
      rep["mu_derivative"] = bif.mu_derivative;
      rep["transversality"] = {{"lhs", bif.transversality_lhs}, {"rhs", bif.transversality_rhs}};
      std::cout << "lambda* " << num(bif.lambda) << "\n";
    } else if (st == WBR_ERR_NO_BIFURCATION) {
      rep["found"] = false;
      rep["message"] = wbr_last_error();
      code = kNoBifurcation;
      std::cerr << "no bifurcation: " << wbr_last_error() << "\n";
    } else {
      fail_status(st, "dispersion");
    }
    out.add("dispersion.json", rep.dump(2) + "\n");
  } else if (sub == "homotopy") {
    const auto& s = cfg.schedule;
    std::vector<double> lam(s.size());
    std::vector<int> ok(s.size());
    double order = 0.0;
    check(wbr_homotopy(pr.p, s.data(), s.size(), cfg.mode_k, lam.data(), ok.data(), &order), "homotopy");
    std::string csv = "epsilon,lambda,ok\n";
    for (std::size_t k = 0; k < s.size(); ++k) csv += num(s[k]) + "," + num(lam[k]) + "," + std::to_string(ok[k]) + "\n";
    out.add("homotopy.csv", csv);
    out.add("homotopy.json", json{{"schedule", s}, {"order", order}}.dump(2) + "\n");
    std::cout << "order " << num(order) << "\n";
  } else if (sub == "branch" || sub == "reconstruct") {
    BranchHandle br;
    check(wbr_run_branch(pr.p, &cfg.continuation, bracket, &br.p), "branch");
    const std::size_t n = wbr_branch_size(br.p);
    if (sub == "branch") {
      std::size_t need = 0;
      wbr_branch_csv(br.p, nullptr, 0, &need);
      std::string csv(need, '\0');
      check(wbr_branch_csv(br.p, csv.data(), need, &need), "branch csv");
      csv.resize(need - 1);
      out.add("branch.csv", csv);
      out.add("branch.json", json{{"lambda_bifurcation", wbr_branch_lambda_bifurcation(br.p)},
                                  {"points", n},
                                  {"termination", wbr_termination_string(wbr_branch_termination(br.p))},
                                  {"detail", wbr_branch_detail(br.p)}}
                                     .dump(2) +
                                 "\n");
      std::cout << n << " points, " << wbr_termination_string(wbr_branch_termination(br.p)) << "\n";
    } else {
      arguments["point"] = args.point;
      if (args.point < 0 || static_cast<std::size_t>(args.point) >= n) {
        throw Failure{kBadConfig, "--point " + std::to_string(args.point) + " outside the branch (" +
                                      std::to_string(n) + " points)"};
      }
      const auto k = static_cast<std::size_t>(args.point);
      wbr_point pt{};
      check(wbr_branch_point(br.p, k, &pt), "branch point");
      WaveHandle wave;
      check(wbr_reconstruct(pr.p, br.p, k, cfg.p_atm, &wave.p), "reconstruct");
      std::size_t np = 0;
      std::size_t nx = 0;
      wbr_wave_dims(wave.p, &np, &nx);
      auto field = [&](wbr_field f) {
        const double* d = nullptr;
        std::size_t m = 0;
        check(wbr_wave_field(wave.p, f, &d, &m), "wave field");
        return std::vector<double>(d, d + m);
      };
      const auto xs = field(WBR_FIELD_SURFACE_X);
      const auto eta = field(WBR_FIELD_SURFACE_ETA);
      std::string prof = "x,eta\n";
      for (std::size_t j = 0; j < xs.size(); ++j) prof += num(xs[j]) + "," + num(eta[j]) + "\n";
      out.add("profile.csv", prof);

      const auto x = field(WBR_FIELD_X);
      const auto y = field(WBR_FIELD_Y);
      const auto u = field(WBR_FIELD_U);
      const auto v = field(WBR_FIELD_V);
      const auto pres = field(WBR_FIELD_PRESSURE);
      std::string fcsv = "x,y,u,v,P\n";
      for (std::size_t i = 0; i < x.size(); ++i) {
        fcsv += num(x[i]) + "," + num(y[i]) + "," + num(u[i]) + "," + num(v[i]) + "," + num(pres[i]) + "\n";
      }
      out.add("field.csv", fcsv);

      // State snapshot on the hodograph grid: w = h - H.
      const auto p = nodes(pr);
      std::vector<double> hl(np);
      std::vector<double> hpl(np);
      check(wbr_laminar_profile(pr.p, pt.lambda, hl.data(), hpl.data(), np, nullptr, nullptr), "laminar");
      std::string scsv = "q,p,w,h\n";
      for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t j = 0; j < nx; ++j) {
          const std::size_t idx = i * nx + j;
          scsv += num(x[idx]) + "," + num(p[i]) + "," + num(y[idx] - hl[i]) + "," + num(y[idx]) + "\n";
        }
      }
      out.add("state.csv", scsv);

      double kin = 0.0;
      double dyn = 0.0;
      check(wbr_wave_surface_conditions(wave.p, &kin, &dyn), "surface conditions");
      out.add("reconstruct.json", json{{"point", k},
                                       {"lambda", pt.lambda},
                                       {"c", wbr_wave_speed_of(wave.p)},
                                       {"amplitude", pt.amplitude},
                                       {"p_atm", cfg.p_atm},
                                       {"kinematic_residual", kin},
                                       {"dynamic_residual", dyn}}
                                          .dump(2) +
                                      "\n");
      std::cout << "point " << k << " lambda " << num(pt.lambda) << "\n";
    }
  } else {
    throw Failure{kInternal, "unhandled subcommand " + sub};
  }
  manifest["arguments"] = arguments;
  out.flush(manifest);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bifurcation toolkit for periodic steady water waves with piecewise smooth vorticity"};
  app.require_subcommand(1);
  Args args;
  app.add_option("-c,--config", args.config, "JSON run configuration")->required();
  app.add_option("--set", args.overrides, "Override a config value, key.path=value (repeatable)");
  app.set_version_flag("--version", std::string(wbr_version()));

  app.add_subcommand("check", "Admissibility report for the configured vorticity");
  auto* lam = app.add_subcommand("laminar", "Laminar profile H(p; lambda)");
  lam->add_option("--lambda", args.lambda, "Bifurcation parameter")->required();
  auto* disp = app.add_subcommand("dispersion", "Locate the bifurcation point");
  disp->add_option("--scan", args.scan, "Also tabulate mu on lo:hi:n");
  app.add_subcommand("branch", "Continue the bifurcating branch");
  app.add_subcommand("homotopy", "Track lambda* along the epsilon schedule");
  auto* rec = app.add_subcommand("reconstruct", "Physical fields at a branch point");
  rec->add_option("--point", args.point, "Branch point index")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kBadConfig;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    return run(sub, args);
  } catch (const Failure& f) {
    std::cerr << "wavebranch: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "wavebranch: internal error: " << e.what() << "\n";
    return kInternal;
  }
}
