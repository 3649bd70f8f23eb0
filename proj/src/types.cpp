#include "metrolab/types.hpp"

#include <cstdlib>
#include <string>

#include "metrolab/error.hpp"

namespace metrolab {

std::size_t max_dense_dim() {
  if (const char* env = std::getenv("METROLAB_MAX_DIM")) {
    try {
      const long long v = std::stoll(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 4096;
}

void require_dense_dim(std::size_t dim, const char* context) {
  const std::size_t cap = max_dense_dim();
  if (dim > cap) {
    throw NumericError(std::string(context) + ": dimension " + std::to_string(dim) +
                       " exceeds dense cap " + std::to_string(cap) + " (set METROLAB_MAX_DIM)");
  }
}

double hermiticity_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace metrolab
