#include "bandshare/regulatory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>

#include <fmt/core.h>

#include "bandshare/error.hpp"
#include "text_util.hpp"

namespace bandshare::regulatory {

namespace {

struct PowerRow {
  int bandwidth_mhz;
  double low_power_w;
  double high_power_w;
};

// Maximum conducted power, 4940-4990 MHz.
constexpr std::array<PowerRow, 5> kPowerTable{{
    {1, 0.005, 0.1},
    {5, 0.025, 0.5},
    {10, 0.05, 1.0},
    {15, 0.075, 1.5},
    {20, 0.1, 2.0},
}};

constexpr std::array<int, 5> kAllowedAggregateWidths{1, 5, 10, 15, 20};

}  // namespace

BandPlan::BandPlan(std::vector<Channel> channels) : channels_(std::move(channels)) {
  if (channels_.empty()) throw ValidationError("band plan has no channels");
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    const Channel& ch = channels_[i];
    if (ch.bandwidth_mhz != 1 && ch.bandwidth_mhz != 5) {
      throw ValidationError(fmt::format("channel {}: bandwidth {} MHz not in {{1, 5}}", ch.index,
                                        ch.bandwidth_mhz));
    }
    if (ch.lower_edge_mhz() < kBandLowMhz || ch.upper_edge_mhz() > kBandHighMhz) {
      throw ValidationError(fmt::format("channel {}: span [{}, {}] MHz leaves the band", ch.index,
                                        ch.lower_edge_mhz(), ch.upper_edge_mhz()));
    }
    if (ch.index != static_cast<int>(i) + 1) {
      throw ValidationError(fmt::format("channel at position {} has index {}", i + 1, ch.index));
    }
    if (i > 0 && channels_[i - 1].upper_edge_mhz() > ch.lower_edge_mhz()) {
      throw ValidationError(fmt::format("channels {} and {} overlap", ch.index - 1, ch.index));
    }
  }
}

const Channel& BandPlan::channel(int index) const {
  if (index < 1 || index > static_cast<int>(channels_.size())) {
    throw ValidationError(fmt::format("unknown channel index {}", index));
  }
  return channels_[static_cast<std::size_t>(index - 1)];
}

BandPlan standard_band_plan() {
  std::vector<Channel> channels;
  int index = 1;
  for (int i = 0; i < 5; ++i) channels.push_back({index++, 4940.5 + i, 1});
  for (int i = 0; i < 8; ++i) channels.push_back({index++, 4947.5 + 5.0 * i, 5});
  for (int i = 0; i < 5; ++i) channels.push_back({index++, 4985.5 + i, 1});
  return BandPlan(std::move(channels));
}

bool is_allowed_aggregate_width(int bandwidth_mhz) {
  return std::find(kAllowedAggregateWidths.begin(), kAllowedAggregateWidths.end(),
                   bandwidth_mhz) != kAllowedAggregateWidths.end();
}

AggregateChannel validate_aggregation(const BandPlan& plan, std::span<const int> indices) {
  if (indices.empty()) throw ValidationError("empty channel aggregate");
  std::vector<int> members(indices.begin(), indices.end());
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw ValidationError("duplicate channel in aggregate");
  }
  int total = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const Channel& ch = plan.channel(members[i]);
    if (i > 0 && plan.channel(members[i - 1]).upper_edge_mhz() != ch.lower_edge_mhz()) {
      throw ValidationError(fmt::format("fragmented aggregate: channels {} and {} are not adjacent",
                                        members[i - 1], members[i]));
    }
    total += ch.bandwidth_mhz;
  }
  if (total > kMaxAggregateMhz) {
    throw ValidationError(
        fmt::format("aggregation cap exceeded: {} MHz > {} MHz", total, kMaxAggregateMhz));
  }
  if (!is_allowed_aggregate_width(total)) {
    throw ValidationError(fmt::format("disallowed aggregate width {} MHz", total));
  }
  const double lower = plan.channel(members.front()).lower_edge_mhz();
  const double upper = plan.channel(members.back()).upper_edge_mhz();
  return AggregateChannel{std::move(members), total, 0.5 * (lower + upper)};
}

std::vector<int> parse_channel_list(std::string_view text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item =
        detail::trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      const auto v = detail::parse_int(item);
      if (!v) throw ValidationError(fmt::format("bad channel '{}'", item));
      out.push_back(*v);
    } else {
      const auto lo = detail::parse_int(detail::trim(item.substr(0, dash)));
      const auto hi = detail::parse_int(detail::trim(item.substr(dash + 1)));
      if (!lo || !hi || *lo > *hi) throw ValidationError(fmt::format("bad channel range '{}'", item));
      for (int i = *lo; i <= *hi; ++i) out.push_back(i);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

PowerClass parse_power_class(std::string_view text) {
  if (text == "low") return PowerClass::Low;
  if (text == "high") return PowerClass::High;
  throw ValidationError(fmt::format("unknown power class '{}' (expected low or high)", text));
}

std::string_view to_string(PowerClass power_class) {
  return power_class == PowerClass::Low ? "low" : "high";
}

double max_conducted_power_w(int bandwidth_mhz, PowerClass power_class) {
  for (const auto& row : kPowerTable) {
    if (row.bandwidth_mhz == bandwidth_mhz) {
      return power_class == PowerClass::Low ? row.low_power_w : row.high_power_w;
    }
  }
  throw ValidationError(fmt::format("no power limit defined for {} MHz", bandwidth_mhz));
}

PowerCheck check_tx_power(double tx_power_w, int bandwidth_mhz, PowerClass power_class) {
  if (!(tx_power_w > 0.0) || !std::isfinite(tx_power_w)) {
    throw ValidationError(fmt::format("tx power {} W must be finite and > 0", tx_power_w));
  }
  const double limit = max_conducted_power_w(bandwidth_mhz, power_class);
  return PowerCheck{tx_power_w <= limit, tx_power_w, limit, 10.0 * std::log10(limit / tx_power_w)};
}

EmissionMask::EmissionMask(std::string name, std::vector<MaskBreakpoint> breakpoints)
    : name_(std::move(name)), breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.empty()) throw ValidationError(fmt::format("mask '{}' has no breakpoints", name_));
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const auto& bp = breakpoints_[i];
    if (!std::isfinite(bp.offset_mhz) || bp.offset_mhz < 0.0 || !std::isfinite(bp.attenuation_db) ||
        bp.attenuation_db < 0.0) {
      throw ValidationError(fmt::format("mask '{}': breakpoint {} must be finite and nonnegative",
                                        name_, i + 1));
    }
    if (i > 0 && !(breakpoints_[i - 1].offset_mhz < bp.offset_mhz)) {
      throw ValidationError(
          fmt::format("mask '{}': offsets must be strictly increasing (breakpoint {})", name_, i + 1));
    }
    if (i > 0 && breakpoints_[i - 1].attenuation_db > bp.attenuation_db) {
      throw ValidationError(
          fmt::format("mask '{}': attenuation decreases at breakpoint {}", name_, i + 1));
    }
  }
}

double EmissionMask::required_attenuation_db(double edge_offset_mhz) const {
  if (edge_offset_mhz <= breakpoints_.front().offset_mhz) return breakpoints_.front().attenuation_db;
  if (edge_offset_mhz >= breakpoints_.back().offset_mhz) return breakpoints_.back().attenuation_db;
  const auto upper = std::upper_bound(
      breakpoints_.begin(), breakpoints_.end(), edge_offset_mhz,
      [](double x, const MaskBreakpoint& bp) { return x < bp.offset_mhz; });
  const auto lower = std::prev(upper);
  const double t = (edge_offset_mhz - lower->offset_mhz) / (upper->offset_mhz - lower->offset_mhz);
  return lower->attenuation_db + (upper->attenuation_db - lower->attenuation_db) * t;
}

EmissionMask parse_emission_mask(std::string name, std::string_view text) {
  std::vector<MaskBreakpoint> breakpoints;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto fields = detail::split_ws(detail::strip_comment(line));
    if (fields.empty()) return;
    const auto offset = fields.size() == 2 ? detail::parse_number(fields[0]) : std::nullopt;
    const auto atten = fields.size() == 2 ? detail::parse_number(fields[1]) : std::nullopt;
    if (!offset || !atten) {
      throw ValidationError(fmt::format("mask '{}' line {}: expected 'offset_mhz attenuation_db'",
                                        name, line_no));
    }
    breakpoints.push_back({*offset, *atten});
  });
  return EmissionMask(std::move(name), std::move(breakpoints));
}

EmissionMask load_emission_mask(const std::string& path) {
  return parse_emission_mask(std::filesystem::path(path).stem().string(), detail::read_file(path));
}

std::vector<PsdSample> parse_psd(std::string_view text) {
  std::vector<PsdSample> samples;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto fields = detail::split_ws(detail::strip_comment(line));
    if (fields.empty()) return;
    const auto freq = fields.size() == 2 ? detail::parse_number(fields[0]) : std::nullopt;
    const auto psd = fields.size() == 2 ? detail::parse_number(fields[1]) : std::nullopt;
    if (!freq || !psd || !std::isfinite(*freq) || std::isnan(*psd) || *psd == HUGE_VAL) {
      throw ValidationError(
          fmt::format("psd line {}: expected 'freq_mhz psd_dbm_per_mhz'", line_no));
    }
    samples.push_back({*freq, *psd});
  });
  return samples;
}

ComplianceReport check_emission_mask(std::span<const PsdSample> samples,
                                     const AggregateChannel& channel, const EmissionMask& mask) {
  if (samples.empty()) throw ValidationError("no PSD samples");
  const double lower = channel.lower_edge_mhz();
  const double upper = channel.upper_edge_mhz();
  const auto in_band = [&](const PsdSample& s) { return s.freq_mhz >= lower && s.freq_mhz <= upper; };

  ComplianceReport report;
  report.mask_name = mask.name();
  bool have_reference = false;
  for (const auto& s : samples) {
    if (!std::isfinite(s.freq_mhz) || std::isnan(s.psd_dbm_per_mhz) || s.psd_dbm_per_mhz == HUGE_VAL) {
      throw ValidationError(fmt::format("invalid PSD sample at {} MHz", s.freq_mhz));
    }
    if (in_band(s)) {
      report.reference_psd_dbm_per_mhz =
          have_reference ? std::max(report.reference_psd_dbm_per_mhz, s.psd_dbm_per_mhz)
                         : s.psd_dbm_per_mhz;
      have_reference = true;
      ++report.in_band_samples;
    }
  }
  if (!have_reference) throw ValidationError("reference PSD undefined: no sample inside the channel");

  for (const auto& s : samples) {
    if (in_band(s)) continue;
    ++report.out_of_band_samples;
    const double offset = s.freq_mhz < lower ? lower - s.freq_mhz : s.freq_mhz - upper;
    const double attenuation = mask.required_attenuation_db(offset);
    const double limit = report.reference_psd_dbm_per_mhz - attenuation;
    if (s.psd_dbm_per_mhz > limit) {
      report.violations.push_back(
          {s.freq_mhz, s.psd_dbm_per_mhz, offset, attenuation, limit, s.psd_dbm_per_mhz - limit});
    }
  }
  return report;
}

}  // namespace bandshare::regulatory
