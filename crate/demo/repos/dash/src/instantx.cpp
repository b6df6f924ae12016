// Copyright (c) 2014 The Dash developers
// instant send
