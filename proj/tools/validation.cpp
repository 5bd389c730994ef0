#include "validation.hpp"

#include <algorithm>

#include "datalimit/closed_form.hpp"
#include "datalimit/numerics.hpp"
#include "datalimit/quadrature.hpp"

namespace datalimit::cli {
namespace {

class Check {
 public:
  Check(std::string name, double tol) { result_.name = std::move(name), result_.tolerance = tol; }

  void add(double closed, double oracle) {
    result_.max_rel_dev = std::max(result_.max_rel_dev, relative_difference(closed, oracle));
    ++result_.samples;
  }

  CheckResult done() const { return result_; }

 private:
  CheckResult result_;
};

MobilityProfile one_dimensional(const LinkBudget& b, double v) { return {b.ref_distance_m, 0.0, v}; }

}  // namespace

std::vector<CheckResult> run_validation(const LinkBudget& base, const EvalOptions& opts) {
  std::vector<CheckResult> out;
  const double d0 = base.ref_distance_m;

  {
    Check c("thm1_vs_quadrature", 1e-6);
    for (double s : {1e1, 1e3, 1e5, 1e7, 1e8})
      for (double alpha : {2.0, 2.5, 3.0, 4.0})
        for (double v : {1.0, 5.0, 50.0}) {
          LinkBudget b = base.with_transmit_snr(s);
          b.path_loss_exp = alpha;
          const auto q = require_converged(integrate_infinite(b, one_dimensional(b, v), opts.quadrature));
          c.add(d_inf_1(b, v, opts.series).nats(), q.value);
        }
    out.push_back(c.done());
  }
  {
    Check thm1("thm1_vs_cor2", 1e-10);
    Check thm2("thm2_vs_cor2", 1e-10);
    for (double s : {1e1, 1e3, 1e5, 1e8}) {
      LinkBudget b = base.with_transmit_snr(s);
      b.path_loss_exp = 2.0;
      const double cor2 = d_inf_3(b, 5.0).nats();
      thm1.add(d_inf_1(b, 5.0, opts.series).nats(), cor2);
      thm2.add(d_inf_2(b, one_dimensional(b, 5.0)).nats(), cor2);
    }
    out.push_back(thm1.done());
    out.push_back(thm2.done());
  }
  {
    Check c("thm2_vs_quadrature", 1e-6);
    LinkBudget b = base;
    b.path_loss_exp = 2.0;
    for (double z0 : {0.0, 1.0, 10.0, 100.0, 1000.0})
      for (double x0 : {d0, 10.0 * d0}) {
        const MobilityProfile p{x0, z0, 5.0};
        c.add(d_inf_2(b, p).nats(), require_converged(integrate_infinite(b, p, opts.quadrature)).value);
      }
    out.push_back(c.done());
  }
  {
    Check c("finite_alpha2_vs_quadrature", 1e-8);
    LinkBudget b = base;
    b.path_loss_exp = 2.0;
    for (double z0 : {0.0, 100.0})
      for (double t : {1.0, 60.0, 3600.0, 86400.0}) {
        const MobilityProfile p{d0, z0, 5.0};
        c.add(d_t_closed_alpha2(b, p, t).nats(),
              require_converged(integrate_finite(b, p, t, opts.quadrature)).value);
      }
    out.push_back(c.done());
  }
  {
    Check c("error_equals_tight_envelope_alpha2", 1e-12);
    SeriesOptions long_series = opts.series;
    long_series.max_terms = std::max(long_series.max_terms, 100000);
    long_series.target_abs_error = 1e-300;  // the error itself is tiny; sum to full relative precision
    for (double s : {1.5, 10.0, 1e3, 1e5, 1e8}) {
      LinkBudget b = base.with_transmit_snr(s);
      b.path_loss_exp = 2.0;
      c.add(approx_error(b, 5.0, long_series), error_envelope(b, 5.0).tight);
    }
    out.push_back(c.done());
  }
  return out;
}

}  // namespace datalimit::cli
