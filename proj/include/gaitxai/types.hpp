#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "gaitxai/errors.hpp"

namespace gaitxai {

enum class Side { Left = 0, Right = 1 };
enum class Component { V = 0, AP = 1, ML = 2 };

inline constexpr std::size_t kNumChannels = 6;

// One of the six GRF curves of a trial: {left,right} x {V,AP,ML}.
struct ChannelId {
  Side side;
  Component component;

  // Canonical ordering: L_V, L_AP, L_ML, R_V, R_AP, R_ML.
  std::size_t index() const {
    return static_cast<std::size_t>(side) * 3 +
           static_cast<std::size_t>(component);
  }
  static ChannelId from_index(std::size_t i) {
    return {static_cast<Side>(i / 3), static_cast<Component>(i % 3)};
  }
  std::string name() const {
    static const char* names[kNumChannels] = {"L_V",  "L_AP", "L_ML",
                                              "R_V",  "R_AP", "R_ML"};
    return names[index()];
  }
  static ChannelId from_name(const std::string& s);

  bool operator==(const ChannelId&) const = default;
};

enum class Sex { Female = 0, Male = 1 };

inline int class_of(Sex s) { return static_cast<int>(s); }

// One walking trial: six stance-phase-normalized GRF curves plus metadata.
struct GaitTrial {
  std::string subject_id;
  std::string trial_id;
  Sex sex = Sex::Female;
  double body_mass_kg = 0.0;
  std::array<std::vector<double>, kNumChannels> curves;

  const std::vector<double>& curve(ChannelId id) const {
    return curves[id.index()];
  }
  std::vector<double>& curve(ChannelId id) { return curves[id.index()]; }

  // Throws if a channel is missing, lengths disagree, T < 2, or a value is
  // non-finite.
  void validate() const;
};

struct Dataset {
  std::vector<GaitTrial> trials;
  std::size_t series_length = 0;  // T, shared by all trials

  // Establishes all Dataset invariants (consistent sex per subject,
  // per-trial validity, shared T).
  void validate() const;
  bool empty() const { return trials.empty(); }
};

// Normalized, concatenated multi-channel series fed to the network.
struct InputSample {
  std::vector<std::vector<double>> channels;  // C series of length L
  int label = 0;                              // 0 = female, 1 = male
  std::string subject_id;
  std::string trial_id;

  std::size_t num_channels() const { return channels.size(); }
  std::size_t length() const {
    return channels.empty() ? 0 : channels.front().size();
  }
};

}  // namespace gaitxai
