#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bandshare::regulatory {

inline constexpr double kBandLowMhz = 4940.0;
inline constexpr double kBandHighMhz = 4990.0;
inline constexpr int kMaxAggregateMhz = 20;

struct Channel {
  int index = 0;  // 1-based ordinal, low to high frequency
  double center_mhz = 0.0;
  int bandwidth_mhz = 0;  // 1 or 5

  double lower_edge_mhz() const { return center_mhz - 0.5 * bandwidth_mhz; }
  double upper_edge_mhz() const { return center_mhz + 0.5 * bandwidth_mhz; }
};

/// An ordered channelization of the band. The constructor checks widths,
/// band containment and that channels tile without overlap.
class BandPlan {
 public:
  explicit BandPlan(std::vector<Channel> channels);

  const std::vector<Channel>& channels() const { return channels_; }
  /// Throws ValidationError for an index outside the plan.
  const Channel& channel(int index) const;

 private:
  std::vector<Channel> channels_;
};

/// Five 1 MHz channels, eight 5 MHz channels, five 1 MHz channels covering 4940-4990 MHz.
BandPlan standard_band_plan();

struct AggregateChannel {
  std::vector<int> members;  // sorted ascending
  int total_bandwidth_mhz = 0;
  double center_mhz = 0.0;

  double lower_edge_mhz() const { return center_mhz - 0.5 * total_bandwidth_mhz; }
  double upper_edge_mhz() const { return center_mhz + 0.5 * total_bandwidth_mhz; }
};

/// True for the widths an aggregate (or standalone channel) may occupy: 1, 5, 10, 15, 20 MHz.
bool is_allowed_aggregate_width(int bandwidth_mhz);

/// Accepts the channel set iff it is frequency-contiguous and its total width
/// is an allowed aggregate width. Order of `indices` does not matter.
AggregateChannel validate_aggregation(const BandPlan& plan, std::span<const int> indices);

/// Parses "12,13", "6-9" or a mix such as "1,2-4" into channel indices.
std::vector<int> parse_channel_list(std::string_view text);

enum class PowerClass { Low, High };

PowerClass parse_power_class(std::string_view text);
std::string_view to_string(PowerClass power_class);

/// Maximum conducted power per bandwidth and class; exact lookup over the
/// five tabulated widths.
double max_conducted_power_w(int bandwidth_mhz, PowerClass power_class);

struct PowerCheck {
  bool pass = false;
  double tx_power_w = 0.0;
  double limit_w = 0.0;
  double margin_db = 0.0;  // 10*log10(limit / tx); negative when over the limit
};

PowerCheck check_tx_power(double tx_power_w, int bandwidth_mhz, PowerClass power_class);

struct MaskBreakpoint {
  double offset_mhz = 0.0;  // from the nearest channel edge
  double attenuation_db = 0.0;
};

class EmissionMask {
 public:
  EmissionMask(std::string name, std::vector<MaskBreakpoint> breakpoints);

  const std::string& name() const { return name_; }
  const std::vector<MaskBreakpoint>& breakpoints() const { return breakpoints_; }

  /// Piecewise-linear in offset, clamped to the first/last breakpoint.
  double required_attenuation_db(double edge_offset_mhz) const;

 private:
  std::string name_;
  std::vector<MaskBreakpoint> breakpoints_;
};

/// Parses "offset_mhz attenuation_db" lines; '#' starts a comment.
EmissionMask parse_emission_mask(std::string name, std::string_view text);
/// Loads a mask file; the mask is named after the file stem.
EmissionMask load_emission_mask(const std::string& path);

struct PsdSample {
  double freq_mhz = 0.0;
  double psd_dbm_per_mhz = 0.0;  // -inf means no measurable emission
};

/// Parses "freq_mhz psd_dbm_per_mhz" lines; '#' starts a comment.
std::vector<PsdSample> parse_psd(std::string_view text);

struct MaskViolation {
  double freq_mhz = 0.0;
  double psd_dbm_per_mhz = 0.0;
  double edge_offset_mhz = 0.0;
  double required_attenuation_db = 0.0;
  double limit_dbm_per_mhz = 0.0;
  double deficit_db = 0.0;
};

struct ComplianceReport {
  std::string mask_name;
  double reference_psd_dbm_per_mhz = 0.0;
  std::size_t in_band_samples = 0;
  std::size_t out_of_band_samples = 0;
  std::vector<MaskViolation> violations;

  bool compliant() const { return violations.empty(); }
};

/// Reference level is the peak PSD inside the aggregate (edges inclusive).
/// Meeting the mask exactly is compliant.
ComplianceReport check_emission_mask(std::span<const PsdSample> samples,
                                     const AggregateChannel& channel, const EmissionMask& mask);

}  // namespace bandshare::regulatory
