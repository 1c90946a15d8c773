#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psd2code/pipeline/document.hpp"

namespace psd2code::prompt {

struct Attachment {
  std::string name;                 // e.g. "screenshot.png"
  std::vector<std::uint8_t> bytes;  // raw file content, sent base64 over http
  std::string digest;               // sha256 of bytes
};

// Machine-readable copy of the hard constraints; consumed by the template
// backend and the validator, never sent to the model.
struct EchoElement {
  std::string id;
  std::string cls;  // kebab-case class name, unique per element
  pipeline::ElementType type = pipeline::ElementType::image;
  std::int64_t x = 0, y = 0, width = 0, height = 0;  // absolute page coordinates
  int z = 0;
  std::string asset;  // image elements bound to an asset
  std::string text;   // text elements
};

struct ConstraintEcho {
  std::int64_t page_width = 0;
  std::int64_t page_height = 0;
  std::vector<EchoElement> elements;  // leaf elements in pre-order
  std::vector<assets::AssetRecord> assets;
};

std::string constraint_echo_to_json(const ConstraintEcho& echo);

struct PromptBundle {
  std::string system;
  std::string example;
  std::string user;
  std::vector<Attachment> attachments;
  ConstraintEcho constraint_echo;
};

struct AblationFlags {
  bool no_structural = false;   // drop PSD-derived fragments, keep the screenshot
  bool no_attachments = false;  // drop the screenshot, keep structured text
  bool simple_prompt = false;   // minimal instruction, no example, no constraint engineering
};

struct PromptOptions {
  AblationFlags ablation;
  std::optional<std::filesystem::path> screenshot;  // attached unless no_attachments
};

class PromptError : public std::runtime_error {
 public:
  explicit PromptError(const std::string& what) : std::runtime_error(what) {}
};

// Fragment header markers; ablation tests assert on their absence.
inline constexpr const char* kStructureHeader = "## Structure";
inline constexpr const char* kAssetsHeader = "## Assets";
inline constexpr const char* kConstraintsHeader = "## Constraints";

// Builds the three-part prompt (system rules, worked example, user message
// with structural prior + asset alignment + hard constraints) from an aligned
// document. Pure function of (doc, options). Throws PromptError on a document
// without leaf elements.
PromptBundle build_prompt(const pipeline::DesignDocument& doc, const PromptOptions& options);

// Stable content digest over (system, example, user, attachment digests).
std::string hash_prompt(const PromptBundle& bundle);

// Writes system.txt, example.txt, user.txt and constraints.json for audit.
void export_bundle(const PromptBundle& bundle, const std::filesystem::path& dir);

// The compiled-in worked example used in every non-simple prompt.
const pipeline::DesignDocument& example_document();
const std::string& example_code();

// Class name used for an element in generated code: kebab-case name suffixed
// with the element id, or the id alone when the name has no ASCII part.
std::string class_for_element(const std::string& name, const std::string& id);

}  // namespace psd2code::prompt
