#include "dislo/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace dislo::fft {
namespace {

// Plan creation is not thread safe in FFTW; execution with new-array calls is.
struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  fftw_plan c2c(int rows, int cols, int sign) {
    std::lock_guard lock(mutex);
    auto key = std::make_tuple(rows, cols, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    auto* buf = fftw_alloc_complex(std::size_t(rows) * cols);
    // Eigen is column-major: the fastest axis is the row index, so FFTW sees (cols, rows).
    fftw_plan p = fftw_plan_dft_2d(cols, rows, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!p) throw std::runtime_error("fftw: plan creation failed");
    plans.emplace(key, p);
    return p;
  }

  fftw_plan r2r(int rows, int cols) {
    std::lock_guard lock(mutex);
    auto key = std::make_tuple(rows, cols, 7);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    auto* buf = fftw_alloc_real(std::size_t(rows) * cols);
    fftw_plan p = fftw_plan_r2r_2d(cols, rows, buf, buf, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!p) throw std::runtime_error("fftw: plan creation failed");
    plans.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [k, p] : plans) fftw_destroy_plan(p);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

Eigen::ArrayXXcd run(const Eigen::ArrayXXcd& in, int sign) {
  Eigen::ArrayXXcd out(in.rows(), in.cols());
  fftw_plan p = cache().c2c(int(in.rows()), int(in.cols()), sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

Eigen::ArrayXXcd forward(const Eigen::ArrayXXcd& samples) {
  return run(samples, FFTW_FORWARD) / double(samples.size());
}

Eigen::ArrayXXcd forward(const Eigen::ArrayXXd& samples) { return forward(Eigen::ArrayXXcd(samples.cast<std::complex<double>>())); }

Eigen::ArrayXXcd inverse(const Eigen::ArrayXXcd& coeffs) { return run(coeffs, FFTW_BACKWARD); }

Eigen::ArrayXXd inverse_real(const Eigen::ArrayXXcd& coeffs) { return inverse(coeffs).real(); }

Eigen::ArrayXXd dst2(const Eigen::ArrayXXd& a) {
  Eigen::ArrayXXd out(a.rows(), a.cols());
  fftw_plan p = cache().r2r(int(a.rows()), int(a.cols()));
  fftw_execute_r2r(p, const_cast<double*>(a.data()), out.data());
  return out;
}

}  // namespace dislo::fft
