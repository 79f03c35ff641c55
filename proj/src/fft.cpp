#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "scalefit/error.hpp"

namespace scalefit::detail {

namespace {

// FFTW's planner is not thread-safe; executing a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  explicit Plan(fftw_plan plan) : plan_(plan) {
    if (plan_ == nullptr) fail(ErrorKind::Synthesis, "FFTW could not create a plan");
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

}  // namespace

std::vector<double> real_even_spectrum(std::span<const double> c) {
  const std::size_t n = c.size();
  std::vector<double> in(c.begin(), c.end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan raw = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    raw = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                               reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  Plan plan(raw);
  plan.execute();
  std::vector<double> spectrum(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) spectrum[k] = out[k].real();
  return spectrum;
}

std::vector<double> hermitian_synthesis(std::span<const std::complex<double>> half,
                                        std::size_t n) {
  std::vector<std::complex<double>> in(half.begin(), half.end());
  std::vector<double> out(n);
  fftw_plan raw = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    raw = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                               out.data(), FFTW_ESTIMATE);
  }
  Plan plan(raw);
  plan.execute();
  return out;
}

}  // namespace scalefit::detail
