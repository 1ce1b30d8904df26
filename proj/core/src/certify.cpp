#include "zo/harness.hpp"

namespace zo {

Certificate certify(const Problem& p, const Vector& x, double eps, double delta,
                    std::size_t dense_cap) {
  require_dim(x, p.dim(), "certify");
  Certificate c;
  c.grad_norm = p.gradient(x).norm();
  c.min_hessian_eig = min_hessian_eigenvalue(p, x, dense_cap);
  c.is_ssp = c.grad_norm <= eps && c.min_hessian_eig >= -delta;
  if (const auto fs = p.optimal_value()) {
    c.gap = p.value(x) - *fs;
    c.is_eps_optimal = *c.gap <= eps;
  }
  return c;
}

}  // namespace zo
