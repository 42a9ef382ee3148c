// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "adsst/types.hpp"

namespace adsst {

struct Interval {
  double begin = 0.0;
  double end = 0.0;
  double length() const { return end - begin; }
  bool contains(double t) const { return t >= begin && t <= end; }
};

// One AM-FM component A(t) exp(i 2 pi phi(t)). Phase is in cycles, so phi'
// is the instantaneous frequency in Hz.
class ComponentProfile {
 public:
  using Fn = std::function<double(double)>;

  struct Evaluators {
    Fn amplitude, amplitude_d1, amplitude_d2;
    Fn phase, freq, chirp_rate, chirp_accel;
  };

  ComponentProfile(std::string kind, Evaluators ev,
                   std::vector<std::pair<std::string, double>> params,
                   Interval domain, bool numeric_derivatives = false);

  double amplitude(double t) const { return ev_.amplitude(t); }
  double amplitude_d1(double t) const { return ev_.amplitude_d1(t); }
  double amplitude_d2(double t) const { return ev_.amplitude_d2(t); }
  double phase(double t) const { return ev_.phase(t); }
  double freq(double t) const { return ev_.freq(t); }
  double chirp_rate(double t) const { return ev_.chirp_rate(t); }
  double chirp_accel(double t) const { return ev_.chirp_accel(t); }

  // A(t) e^{i 2 pi phi(t)}, with the phase reduced mod 1 before scaling.
  cplx value(double t) const;

  const std::string& kind() const { return kind_; }
  const std::vector<std::pair<std::string, double>>& params() const { return params_; }
  const Interval& domain() const { return domain_; }
  bool numeric_derivatives() const { return numeric_; }

 private:
  std::string kind_;
  Evaluators ev_;
  std::vector<std::pair<std::string, double>> params_;
  Interval domain_;
  bool numeric_;
};

ComponentProfile make_sinusoid(double A, double c);
ComponentProfile make_linear_chirp(double A, double c, double r, Interval interval);

// A(t) = A0 (1 + am_depth sin(2 pi am_freq t)),
// phi'(t) = c + fm_dev sin(2 pi fm_freq t).
ComponentProfile make_am_fm(double A0, double am_depth, double am_freq, double c,
                            double fm_dev, double fm_freq);

// User-supplied amplitude and phase without derivatives. Derivatives come from
// central differences and the profile is flagged.
ComponentProfile make_custom(ComponentProfile::Fn amplitude, ComponentProfile::Fn phase,
                             Interval interval);

struct MulticomponentModel {
  std::vector<ComponentProfile> components;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double eps3 = 0.0;

  std::size_t size() const { return components.size(); }
  cplx value(double t) const;
};

struct SampledSignal {
  std::vector<cplx> samples;
  double sample_rate = 1.0;
  double t0 = 0.0;

  std::size_t size() const { return samples.size(); }
  double time(std::size_t n) const { return t0 + static_cast<double>(n) / sample_rate; }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
  bool is_real(double tol = 0.0) const;
  void validate() const;
};

// Uniform time and frequency axes of a time-frequency representation.
struct TFGrid {
  std::vector<double> times;
  std::vector<double> freqs;

  static TFGrid uniform(double t_begin, double t_step, std::size_t n_times, double f_begin,
                        double f_step, std::size_t n_freqs);

  double dt() const;
  double deta() const;
  std::size_t n_times() const { return times.size(); }
  std::size_t n_freqs() const { return freqs.size(); }
  void validate() const;
};

SampledSignal sample(const MulticomponentModel& model, double sample_rate, double t0,
                     std::size_t n);
SampledSignal sample(const MulticomponentModel& model, const TFGrid& grid);

enum class ClassOrder { first_order, second_order };

struct ClassViolation {
  std::size_t component;
  double t;
  std::string quantity;
  double value;
  double budget;
};

struct ClassReport {
  bool passes = true;
  double max_amp_rate = 0.0;     // max |A'_k|
  double max_chirp_rate = 0.0;   // max |phi''_k|
  double max_chirp_accel = 0.0;  // max |phi'''_k|
  double min_if_gap = 0.0;       // d', +inf for K < 2
  double min_if = 0.0;
  bool numeric_derivatives = false;
  std::vector<ClassViolation> violations;
};

ClassReport class_check(const MulticomponentModel& model, const std::vector<double>& times,
                        ClassOrder which);

// Signal CSV: header "t,re,im".
void write_signal_csv(std::ostream& out, const SampledSignal& x);
SampledSignal read_signal_csv(std::istream& in);

// Flat key-value model description, e.g.
//   eps1 = 0
//   component.1.type = chirp
//   component.1.A = 1
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string key, const std::string& what);
  std::size_t line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

MulticomponentModel parse_model(std::istream& in, Interval interval);
void write_model(std::ostream& out, const MulticomponentModel& model);

}  // namespace adsst
