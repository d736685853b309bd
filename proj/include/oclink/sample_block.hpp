#ifndef OCLINK_SAMPLE_BLOCK_HPP
#define OCLINK_SAMPLE_BLOCK_HPP

#include <oclink/constellation.hpp>

namespace oclink {

/// Oversampled complex baseband waveform. sample_rate = samples_per_symbol / Ts.
template <typename Scalar = double>
struct SampleBlock {
  ComplexVector<Scalar> samples;
  double sample_rate = 0.0;
  int samples_per_symbol = 1;

  Eigen::Index size() const noexcept { return samples.size(); }
  Eigen::Index symbol_count() const noexcept { return samples.size() / samples_per_symbol; }
  double sample_period() const noexcept { return 1.0 / sample_rate; }
};

}  // namespace oclink

#endif  // OCLINK_SAMPLE_BLOCK_HPP
