#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "twave/evans.hpp"
#include "twave/functionals.hpp"
#include "twave/models.hpp"
#include "twave/oracles.hpp"

namespace twave::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kInvalidInput = 2, kNumericalFailure = 3 };

struct RunConfig {
  std::string command;
  std::string family = "gkdv";
  std::string f_spec = "kdv";
  double a = 0.0;
  double E = -0.01;
  double c = 1.0;
  std::optional<double> u_seed;
  double tol = 1e-8;                 // profile invariant tolerance
  std::optional<double> noise_tol;   // overrides FD / Cauchy self-consistency tolerances
  std::size_t jobs = 1;
  std::size_t points = 2048;
  std::string out_dir = ".";

  std::string oracle;  // "", "cnoidal", "mkdn", "mkcn"
  double alpha = 1.0;
  double gamma = 0.9;

  std::vector<double> k_values{1e-2, 5e-3, 2.5e-3};

  // evans-scan rectangle
  double re_min = -0.1, re_max = 0.1;
  std::size_t re_n = 11;
  double im_min = -0.1, im_max = 0.1;
  std::size_t im_n = 11;
  std::vector<double> scan_k{0.0, 0.05, 0.1};

  // scan grid over (a, E) at fixed c
  double a_min = -0.1, a_max = 0.1;
  std::size_t a_n = 5;
  double E_min = -0.15, E_max = -0.01;
  std::size_t E_n = 5;

  std::string only;  // verify filter
};

/// FNV-1a over the canonical JSON echo of the configuration.
std::string config_hash(const RunConfig& config);
nlohmann::json config_echo(const RunConfig& config);

/// Wave parameters and nonlinearity described by the config (oracle constructions excluded).
WaveParams config_params(const RunConfig& config);

StepPolicy step_policy(const RunConfig& config);
NormalFormOptions normal_form_options(const RunConfig& config);

/// Per-command report builders; each throws twave::Error on failure.
nlohmann::json wave_report(const RunConfig& config, WaveProfile* profile_out = nullptr);
nlohmann::json indices_report(const RunConfig& config);
nlohmann::json branch_report(const RunConfig& config);

/// CSV helpers with %.17g numbers.
std::string format_number(double v);

/// Entry point shared by the twave executable and the tests.
int run(int argc, const char* const* argv);

}  // namespace twave::cli
