#pragma once

// Similarity front-end: structure image -> one logit per alphabet character.
// Two backends share the Classifier interface: a built-in template matcher and
// a table of logits produced by an external model.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcgeval/raster.hpp"

namespace pcgeval {

struct Logits {
  std::vector<double> z;
};

struct ProbabilityVector {
  std::vector<double> v;
  friend bool operator==(const ProbabilityVector&, const ProbabilityVector&) = default;
};

// Max-shifted softmax.
ProbabilityVector softmax(const Logits& logits);

inline constexpr int kGlyphSide = 16;
using Glyph = std::array<bool, kGlyphSide * kGlyphSide>;  // true = black, row-major

// Block-mean downsample to 16x16; a cell is black when its mean intensity is
// below half scale. Images narrower than 16 px replicate source pixels.
Glyph downsample(const Bitmap& image);

class TemplateSet {
 public:
  explicit TemplateSet(std::vector<char> alphabet);

  void add(char character, const Bitmap& image);
  void add(char character, const Glyph& glyph);

  const std::vector<char>& alphabet() const { return alphabet_; }
  const std::vector<Glyph>& templates_for(int index) const { return glyphs_.at(static_cast<std::size_t>(index)); }
  // Throws ConfigError if some character has no template.
  void require_complete() const;

 private:
  std::vector<char> alphabet_;
  std::vector<std::vector<Glyph>> glyphs_;
};

// z_c = alpha * (best matching-pixel fraction over c's templates).
Logits template_classify(const Bitmap& image, const TemplateSet& templates, double alpha = 10.0);

// JSON object: image identifier -> array of exactly `arity` finite numbers.
// Throws LoadError naming the offending key.
std::map<std::string, Logits> load_external_logits(const std::filesystem::path& path, int arity = 26);
std::map<std::string, Logits> parse_external_logits(std::string_view json_text, int arity = 26);

class Classifier {
 public:
  virtual ~Classifier() = default;
  // nullopt when this backend has no answer for the image (trial fails).
  virtual std::optional<Logits> classify(const Bitmap& image, std::string_view image_id) const = 0;
};

class TemplateClassifier final : public Classifier {
 public:
  TemplateClassifier(TemplateSet templates, double alpha);
  std::optional<Logits> classify(const Bitmap& image, std::string_view image_id) const override;

 private:
  TemplateSet templates_;
  double alpha_;
};

class ExternalLogitsClassifier final : public Classifier {
 public:
  explicit ExternalLogitsClassifier(std::map<std::string, Logits> table);
  std::optional<Logits> classify(const Bitmap& image, std::string_view image_id) const override;

 private:
  std::map<std::string, Logits, std::less<>> table_;
};

}  // namespace pcgeval
