#include "election/comm/engine.h"

#include "election/errors.h"

namespace election::comm {

using diff::Tensor;

CommEngine::CommEngine(nn::ParamStore& store, const EngineDims& dims, Rng& rng)
    : dims_(dims),
      vocabulary_(store, "comm/vocabulary", dims.vocab_size + 2, dims.embedding_dim, rng),
      encoder_(store, "comm/encoder/lstm", dims.embedding_dim, dims.message_dim, rng),
      logits_head_(store, "comm/encoder/logits", dims.message_dim, dims.vocab_size + 1,
                   nn::Activation::kNone, rng),
      temperature_head_(store, "comm/encoder/temperature", dims.message_dim, 1,
                        nn::Activation::kSoftplus, rng),
      decoder_(store, "comm/decoder/lstm", dims.embedding_dim, dims.message_dim, rng) {}

Var CommEngine::EmbedSampled(Tape& tape, Var onehot) const {
  // Sampled one-hots cover words + end; the start row gets weight zero.
  Var padded = diff::Concat({onehot, tape.Constant(Tensor({1}))});
  return vocabulary_.Lookup(tape, padded);
}

Var CommEngine::EmbedToken(Tape& tape, int token) const {
  return vocabulary_.Lookup(
      tape, tape.Constant(Tensor::OneHot(dims_.vocab_size + 2, static_cast<std::size_t>(token))));
}

Message CommEngine::Encode(Tape& tape, Var u_msg, Rng& rng, diff::SampleMode mode) const {
  if (u_msg.value().rank() != 1 || u_msg.value().size() != dims_.message_dim) {
    throw ContractError("Encode: u_msg must have dimension " + std::to_string(dims_.message_dim));
  }
  Message msg;
  nn::LstmState state{tape.Constant(Tensor({dims_.message_dim})), u_msg};
  Var input = EmbedToken(tape, start_token());
  for (std::size_t l = 0; l < dims_.max_length; ++l) {
    state = encoder_.Step(tape, input, state);
    Var logits = logits_head_.Forward(tape, state.h);
    Var temperature = diff::AddScalar(temperature_head_.Forward(tape, state.h), dims_.base_temperature);
    msg.temperatures.push_back(temperature.value()[0]);
    diff::CategoricalSample sample = diff::SampleCategorical(logits, temperature, rng, mode);
    if (static_cast<int>(sample.index) == end_token()) {
      msg.terminator = sample.onehot;
      break;
    }
    msg.symbols.push_back(static_cast<int>(sample.index));
    msg.onehots.push_back(sample.onehot);
    if (l + 1 < dims_.max_length) input = EmbedSampled(tape, sample.onehot);
  }
  return msg;
}

Var CommEngine::Decode(Tape& tape, const Message& message) const {
  const bool has_onehots = message.onehots.size() == message.symbols.size();
  nn::LstmState state = decoder_.ZeroState(tape);
  for (std::size_t l = 0; l < message.symbols.size(); ++l) {
    const int symbol = message.symbols[l];
    if (symbol < 0 || symbol >= static_cast<int>(dims_.vocab_size))
      throw ContractError("Decode: symbol id out of range");
    Var onehot = has_onehots ? message.onehots[l]
                             : tape.Constant(Tensor::OneHot(sampleable_size(), static_cast<std::size_t>(symbol)));
    state = decoder_.Step(tape, EmbedSampled(tape, onehot), state);
  }
  Var end = message.terminator ? EmbedSampled(tape, *message.terminator) : EmbedToken(tape, end_token());
  state = decoder_.Step(tape, end, state);
  return state.h;
}

}  // namespace election::comm
