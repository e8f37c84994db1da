// Named probability thresholds for graded epistemic vocabulary.

#pragma once

#include <array>
#include <string>
#include <string_view>

namespace labtom {

class ThresholdTable {
 public:
  static constexpr std::size_t kCount = 10;
  /// Declaration order; also the coordinate order used when fitting.
  static constexpr std::array<std::string_view, kCount> kNames = {
      "believes", "certain", "uncertain", "likely", "unlikely",
      "could",    "might",   "may",       "should", "must"};

  /// Fitted values: believes .75, certain .95, uncertain .70, likely .70,
  /// unlikely .40, could .20, might .20, may .30, should .80, must .95,
  /// alpha_most 1.5.
  static ThresholdTable defaults();
  /// Starting point of the fit: defaults with uncertain .50 and likely .60.
  static ThresholdTable initial();
  /// JSON object of name -> value overriding defaults(); `alpha_most` sets
  /// the multiplier. Throws InputError.
  static ThresholdTable from_json(const std::string& text);
  static ThresholdTable load(const std::string& path);

  /// Throws LoweringError for unknown names.
  double get(std::string_view name) const;
  void set(std::string_view name, double value);
  double at(std::size_t i) const { return theta_[i]; }
  void set_at(std::size_t i, double value);

  double alpha_most() const { return alpha_most_; }
  void set_alpha_most(double alpha);

  static std::size_t index_of(std::string_view name);  // kCount if unknown
  std::string to_json() const;

  friend bool operator==(const ThresholdTable&, const ThresholdTable&) = default;

 private:
  std::array<double, kCount> theta_{};
  double alpha_most_ = 1.5;
};

}  // namespace labtom
