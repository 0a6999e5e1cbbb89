#pragma once

// Scripted escape-room knowledge shared by the simulator and the behavioral
// scorers: per-puzzle spoken passwords, the cognitive-test answer key, and
// the language-wall vocabulary.  An attacker is assumed to know the game
// (public content); only the per-user responses are secret.

#include <array>
#include <cctype>
#include <map>
#include <string>
#include <vector>

namespace vrinfer {

// Spoken door passwords for the scripted game.  Puzzle 5 is the Ishihara
// plate: normal-vision players read "daisy", red-green colorblind players
// read "as".  Puzzles 11 (reaction trial) and 15 (UFO test) have no spoken
// password; 23/24 are read-aloud attempts logged as ReadAttempt events.
inline const std::map<int, std::string>& puzzle_passwords() {
  static const std::map<int, std::string> table = {
      {1, "hello"},    {2, "face"},      {3, "velvet"},     {4, "church"},
      {5, "daisy"},    {6, "red"},       {7, "recluse"},    {8, "cave"},
      {9, "motivation"}, {10, "deafening"}, {12, "finally"}, {13, "apple"},
      {14, "i can"},   {21, "albert einstein"},
  };
  return table;
}

inline constexpr int kIshiharaPuzzleId = 5;
inline constexpr const char* kIshiharaNormalWord = "daisy";
inline constexpr const char* kIshiharaColorblindWord = "as";

// Puzzle 13: the word "apple" in each offered language, romanized.  The
// player looks at the panel of a language they know and speaks the word.
struct LanguageWord {
  const char* code;
  const char* word;
};

inline const std::vector<LanguageWord>& language_words() {
  static const std::vector<LanguageWord> table = {
      {"hi", "seb"},     {"zh", "pingguo"}, {"fr", "pomme"},   {"ja", "ringo"},
      {"ru", "yabloko"}, {"es", "manzana"}, {"pt", "maca"},    {"ar", "tuffaha"},
  };
  return table;
}

// ---------------------------------------------------------------------------
// Cognitive-assessment answer key (puzzles 16-22)
// ---------------------------------------------------------------------------

struct MocaKey {
  std::array<const char*, 3> animals;       // puzzle 16 naming targets
  std::array<int, 5> serial7;               // puzzle 17 correct chain from 100
  std::array<const char*, 2> abstractions;  // puzzle 19 category answers
  std::array<const char*, 2> sentences;     // puzzle 20 repetition targets
  // Puzzle 22 orientation probes: year / month / date / weekday of the
  // (fixed) experiment day.  Place and city are not probed and are credited.
  std::array<const char*, 4> orientation;
};

inline const MocaKey& moca_key() {
  static const MocaKey key = {
      {"lion", "rhinoceros", "camel"},
      {93, 86, 79, 72, 65},
      {"transportation", "measurement"},
      {"i only know that john is the one to help today",
       "the cat always hid under the couch when dogs were in the room"},
      {"2022", "november", "15", "tuesday"},
  };
  return key;
}

// Recall (puzzle 18) has no static key: it asks for the passwords the player
// spoke in puzzles 2-6, so the scorer compares against the same session's
// SpokenPassword records.
inline const std::array<int, 5> kRecallSourcePuzzles = {2, 3, 4, 5, 6};

// Serial-7 rubric: points by number of correct subtractions.
inline int serial7_points(int correct_count) {
  if (correct_count >= 4) return 3;
  if (correct_count >= 2) return 2;
  if (correct_count == 1) return 1;
  return 0;
}

// Fixed credit for categories the scripted game cannot administer: the
// visuospatial/executive drawing tasks (5), the non-serial7 attention items
// (3), verbal fluency (1), and the two unprobed orientation items (2).
// Crediting keeps the instrument's 30-point scale and >26 pass threshold
// meaningful; see FORMATS.md for the rubric table.
inline constexpr int kMocaVisuospatialCredit = 5;
inline constexpr int kMocaAttentionCredit = 3;
inline constexpr int kMocaFluencyCredit = 1;
inline constexpr int kMocaOrientationCredit = 2;

// Separator between the two repetition sentences inside one utterance.
inline constexpr char kSentenceSeparator = ';';

// ---------------------------------------------------------------------------
// Text helpers shared by the scorer and the answer generator
// ---------------------------------------------------------------------------

inline std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Lowercased alphanumeric tokens.
inline std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      tokens.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  return tokens;
}

// Canonical sentence form: lowercased tokens joined by single spaces.
inline std::string normalize_sentence(const std::string& text) {
  std::string out;
  for (const std::string& tok : tokenize(text)) {
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

}  // namespace vrinfer
