#include <gtest/gtest.h>

#include "fractrans/config.hpp"

using namespace fractrans;

namespace {

const char* kSmall = R"({
  "seed": 42,
  "depth": 12,
  "systems": {
    "A": {"lipschitz": 0.5, "maps": [
      {"affine": [0.5, 0, 0, 0.5, 0, 0]}, {"affine": [0.5, 0, 0, 0.5, 0.5, 0]},
      {"affine": [0.5, 0, 0, 0.5, 0.5, 0.5]}, {"affine": [0.5, 0, 0, 0.5, 0, 0.5]}]},
    "B": {"lipschitz": 0.7, "maps": [
      {"bilinear": [[0, 0], [0.6, 0], [0.6, 0.6], [0, 0.6]]},
      {"projective": [0.4, 0, 0.6, 0, 0.6, 0, 0, 0, 1]},
      {"affine": [0.4, 0, 0, 0.4, 0.6, 0.6]}, {"affine": [0.6, 0, 0, 0.4, 0, 0.6]}]}
  },
  "masks": {
    "MA": {"system": "A", "regions": [
      {"all": [{"half_plane": {"axis": "x", "side": "below", "threshold": 0.5}},
               {"half_plane": {"axis": "y", "side": "below", "threshold": 0.5}}]},
      {"all": [{"half_plane": {"axis": "x", "side": "above", "threshold": 0.5, "closed": false}},
               {"half_plane": {"axis": "y", "side": "below", "threshold": 0.5}}]},
      {"box": {"x": {"lo": 0.5, "hi": 1, "lo_closed": false}, "y": {"lo": 0.5, "hi": 1, "lo_closed": false}}},
      {"all": [{"not": {"half_plane": {"axis": "x", "side": "above", "threshold": 0.5, "closed": false}}},
               {"half_plane": {"axis": "y", "side": "above", "threshold": 0.5, "closed": false}}]}]},
    "TA": {"system": "A", "tops": true}
  },
  "probabilities": {"even": [0.25, 0.25, 0.25, 0.25]},
  "pair": {"source": "MA", "target": "TA"}
})";

}  // namespace

TEST(Config, ParsesAndRoundTrips) {
  const Config cfg = parse_config(std::string(kSmall));
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.depth, 12);
  EXPECT_EQ(cfg.systems.size(), 2u);
  EXPECT_EQ(map_kind(cfg.system("B").maps()[0]), "bilinear");
  EXPECT_EQ(classify(cfg.mask("MA").mask, {0.5, 0.5}), 1);
  EXPECT_EQ(classify(cfg.mask("MA").mask, {0.75, 0.5}), 2);
  EXPECT_EQ(parse_config(to_json(cfg)), cfg);
  EXPECT_EQ(parse_config(to_json(cfg).dump()), cfg);
}

TEST(Config, EveryPresetRoundTrips) {
  for (const auto& name : preset_names()) {
    const Config cfg = preset(name);
    EXPECT_EQ(parse_config(to_json(cfg).dump(2)), cfg) << name;
  }
}

TEST(Config, RejectsUnknownKeys) {
  Json doc = Json::parse(kSmall);
  doc["colour"] = "blue";
  EXPECT_THROW(parse_config(doc), ConfigError);
  doc = Json::parse(kSmall);
  doc["systems"]["A"]["contraction"] = 0.5;
  EXPECT_THROW(parse_config(doc), ConfigError);
  doc = Json::parse(kSmall);
  doc["masks"]["MA"]["regions"][0] = {{"circle", 1}};
  EXPECT_THROW(parse_config(doc), ConfigError);
}

TEST(Config, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_config(std::string("{ not json")), ConfigError);
  EXPECT_THROW(parse_config(std::string(R"({"systems": {"A": {"maps": []}}})")), ConfigError);
  EXPECT_THROW(parse_config(std::string(R"({"pair": {"source": "X", "target": "Y"}})")), ConfigError);
  EXPECT_THROW(preset("nope"), ConfigError);
}

TEST(Config, MaskGapIsNumeric) {
  Json doc = Json::parse(kSmall);
  doc["masks"]["MA"]["regions"][2] = {{"box", {{"x", {{"lo", 0.6}, {"hi", 1}}}, {"y", {{"lo", 0.6}, {"hi", 1}}}}}};
  try {
    parse_config(doc);
    FAIL() << "expected MaskGap";
  } catch (const MaskGap& e) {
    EXPECT_TRUE(e.numeric());
  }
}

TEST(Config, ToleranceOverridesAreInstalled) {
  Json doc = Json::parse(kSmall);
  doc["tolerances"] = {{"domain_clamp", 1e-7}};
  const Config cfg = parse_config(doc);
  EXPECT_EQ(tolerances().domain_clamp, 1e-7);
  EXPECT_EQ(cfg.tolerances.domain_clamp, 1e-7);
  tolerances() = Tolerances{};
}

TEST(Config, PairUsesSharedDepth) {
  const Config cfg = preset("goldenlennaex");
  const HomeoPair pair = cfg.homeo_pair("F", "G");
  EXPECT_EQ(pair.forward.source().depth(), pair.backward.source().depth());
  EXPECT_EQ(pair.forward.source().depth(), recommended_depth(cfg.system("F"), 1.0 / 1024));
}
