#ifndef ELECTION_COMM_ENGINE_H_
#define ELECTION_COMM_ENGINE_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "election/diff/gumbel.h"
#include "election/nn/layers.h"

namespace election::comm {

using diff::Tape;
using diff::Var;

// Sender ids: members are 0..n-1, candidates use these negative ids.
inline constexpr int kCandidateOne = -1;
inline constexpr int kCandidateTwo = -2;

struct EngineDims {
  std::size_t vocab_size = 32;     // word symbols
  std::size_t embedding_dim = 16;  // symbol embedding width
  std::size_t message_dim = 16;    // u_msg / v_msg width, also the LSTM hidden width
  std::size_t max_length = 5;
  double base_temperature = 0.2;   // T_0
};

// A broadcast symbol sequence. Word ids are in [0, vocab_size); the end token
// is never stored in `symbols`.
struct Message {
  int sender = 0;
  int step = 0;
  std::vector<int> symbols;
  // Straight-through one-hots over the sampleable set (words + end), parallel
  // to `symbols`. Empty for messages rebuilt from ids.
  std::vector<Var> onehots;
  // The sampled end-token one-hot, when the encoder stopped on one.
  std::optional<Var> terminator;
  // Per-symbol sampling temperatures (including the terminating draw).
  std::vector<double> temperatures;

  std::size_t length() const { return symbols.size(); }
};

// Shared vocabulary, encoder and decoder.
class CommEngine {
 public:
  CommEngine(nn::ParamStore& store, const EngineDims& dims, Rng& rng);

  // u_msg -> symbol sequence. The encoder LSTM starts from (h = 0, c = u_msg)
  // and the start-token embedding; each step samples a symbol with a learned
  // temperature T_0 + softplus(linear(h)) and feeds its embedding back in.
  Message Encode(Tape& tape, Var u_msg, Rng& rng,
                 diff::SampleMode mode = diff::SampleMode::kHard) const;

  // symbols + end token -> final decoder hidden state (v_msg).
  Var Decode(Tape& tape, const Message& message) const;

  const EngineDims& dims() const { return dims_; }
  std::size_t sampleable_size() const { return dims_.vocab_size + 1; }
  int end_token() const { return static_cast<int>(dims_.vocab_size); }
  int start_token() const { return static_cast<int>(dims_.vocab_size) + 1; }

 private:
  Var EmbedSampled(Tape& tape, Var onehot) const;
  Var EmbedToken(Tape& tape, int token) const;

  EngineDims dims_;
  nn::EmbeddingTable vocabulary_;
  nn::LstmCell encoder_;
  nn::Linear logits_head_;
  nn::Linear temperature_head_;
  nn::LstmCell decoder_;
};

}  // namespace election::comm

#endif  // ELECTION_COMM_ENGINE_H_
